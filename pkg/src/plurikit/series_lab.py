"""Formal power series as streams of homogeneous components, with
direction-wise convergence classification and the certificate-driven series
constructions.

A divergent series classifies a direction as convergent exactly when the
normalized brackets of its homogeneous components stay bounded along that
direction.  The builders assemble components from per-level certificate
systems: each component is small on the level set's samples, globally
bounded by its level k, and exceeds k/2 at its cover point, so bounded
directions are the sampled sets and covered directions blow up.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .homogeneous_algebra import (
    HomoPoly,
    PolyProduct,
    ProjPoint,
    bracket,
)
from .certificates import (
    Certificate,
    SampledSet,
    SearchBudget,
    _poly_from_obj,
    _poly_to_obj,
    build_hkj_system,
    graph_level_certificate,
    refute_hull_level,
)
from .planar_regions import GridRegion, polynomial_hull, prop1016_construct, regions_equal, trim

_NEG_INF = float("-inf")


class FormalSeries:
    """Ordered homogeneous components with strictly increasing degrees.

    Components are sparse polynomials or factored products; a factored
    component with an outer power keeps its bracket equal to the base's
    (power invariance), so verdicts are insensitive to the power schedule.
    """

    def __init__(self, components, truncation: int | None = None):
        comps = list(components)
        degrees = [c.degree for c in comps]
        if any(d < 0 for d in degrees):
            raise DomainError("series components must be nonzero")
        if any(b <= a for a, b in zip(degrees, degrees[1:])):
            raise DomainError("component degrees must be strictly increasing")
        self.components = comps
        self.truncation = len(comps) if truncation is None else int(truncation)

    def __len__(self):
        return len(self.components)

    @property
    def nvars(self) -> int:
        if not self.components:
            raise DomainError("empty series")
        return self.components[0].nvars

    @property
    def degrees(self) -> list[int]:
        return [c.degree for c in self.components]


@dataclass(frozen=True)
class DirectionVerdict:
    """Classification of one direction: in, out, or undecided (truncation
    cannot decide boundedness, so verdicts are labeled estimates)."""

    status: str
    sup_seen: float
    growth_slope: float


@dataclass
class MembershipConfig:
    """Decision thresholds for conv_membership; defaults documented here.

    A direction is "in" when the running sup stays at or below `threshold`
    and the tail trend of log-values is nonincreasing (slope <= slope_in_tol,
    a small positive tolerance absorbing least-squares noise on bounded
    oscillating tails); it is "out" when some value exceeds the threshold or
    the tail grows faster than slope_min.  For series built by the level
    constructions the natural threshold is k_max / 2 (the witnessed excess
    at the last level).
    """

    slope_in_tol: float = 0.02
    slope_min: float = 0.05
    tail_fraction: float = 0.5


def hartogs_global_test(f: FormalSeries, cap: int = 96) -> dict:
    """Coefficient-growth estimate of global convergence.

    Computes c_j = max over the component's coefficients of
    |a|**(1/(degree+1)) and reports the sup as witness together with the
    least-squares trend of the tail.  Finite truncations cannot decide
    convergence, so the classification is an estimate.  Components must be
    expandable to coefficient form within the degree cap.
    """
    if len(f) == 0:
        raise DomainError("empty series")
    if len(f) < 8:
        raise DomainError("global test needs at least 8 components")
    cs = []
    for comp in f.components:
        poly = comp if isinstance(comp, HomoPoly) else comp.expand(cap)
        if poly.is_zero:
            raise DomainError("zero component in series")
        best = max(
            (math.log(abs(c)) / (poly.degree + 1) for c in poly.terms.values()),
            default=_NEG_INF,
        )
        cs.append(math.exp(best))
    cs = np.array(cs)
    tail = cs[len(cs) // 2:]
    slope = _tail_slope(np.log(np.maximum(tail, 1e-300)))
    growing = slope > 1e-9
    return {
        "classification": "diverges-estimate" if growing else "converges-estimate",
        "witness_C": float(np.max(cs)),
        "per_component": cs,
        "tail_slope": float(slope),
    }


def _tail_slope(logvals: np.ndarray) -> float:
    finite = np.isfinite(logvals)
    if finite.sum() < 2:
        return _NEG_INF if (~finite).any() else 0.0
    idx = np.arange(len(logvals))[finite]
    vals = logvals[finite]
    return float(np.polyfit(idx, vals, 1)[0])


def restrict_direction(f: FormalSeries, Z: ProjPoint) -> list[tuple[int, float]]:
    """Per-component log magnitudes at the canonical representative of Z."""
    return [(comp.degree, comp.log_abs_at(Z.coords)) for comp in f.components]


def conv_membership(f: FormalSeries, Z: ProjPoint, threshold: float,
                    config: MembershipConfig = MembershipConfig()) -> DirectionVerdict:
    """Classify a direction by the running sup and tail trend of the
    component brackets."""
    if len(f) == 0:
        raise DomainError("empty series")
    vals = np.array([bracket(c, Z) for c in f.components])
    sup_seen = float(np.max(vals))
    ntail = max(2, int(len(vals) * config.tail_fraction))
    with np.errstate(divide="ignore"):
        logs = np.log(vals[-ntail:])
    slope = _tail_slope(logs)
    if sup_seen > threshold or slope > config.slope_min:
        status = "out"
    elif slope <= config.slope_in_tol:
        status = "in"
    else:
        status = "undecided"
    return DirectionVerdict(status=status, sup_seen=sup_seen, growth_slope=slope)


# -- series assembly -----------------------------------------------------------


@dataclass
class BuildReport:
    """Verification summary for an assembled series."""

    levels: list[int] = field(default_factory=list)
    certificates: int = 0
    failures: list = field(default_factory=list)
    in_sample_bound_ok: bool = True
    in_sample_worst: float = 0.0
    cover_witness_ok: bool = True
    cover_witness_min_margin: float = math.inf
    level_samples: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def assemble_series(levels, eta: float, budget: SearchBudget,
                    ) -> tuple[FormalSeries | None, BuildReport]:
    """Core assembler: levels is a list of (k, samples-or-None, cover list).

    Builds the per-level certificate systems, enumerates all emitted
    polynomials into one sequence, and raises each to the smallest power
    that keeps degrees strictly increasing (brackets are power invariant).
    """
    staged = []
    for k, E_k, cover in levels:
        certs, fails = build_hkj_system(E_k, cover, k, eta, budget)
        staged.append((k, E_k, certs, fails))
    return assemble_from_certs(staged)


def assemble_from_certs(staged) -> tuple[FormalSeries | None, BuildReport]:
    """Assemble a series from per-level certificate lists.

    staged: list of (k, samples-or-None, certificates, failures).
    """
    report = BuildReport()
    per_level: list[list[tuple[int, Certificate]]] = []
    for k, E_k, certs, fails in staged:
        report.levels.append(k)
        report.certificates += len(certs)
        report.failures.extend((k, idx, msg) for idx, msg in fails)
        report.level_samples[k] = E_k
        level_list = []
        for cert in certs:
            cert.params["k"] = k
            level_list.append((k, cert))
            margin = cert.point_val - k / 2.0
            report.cover_witness_min_margin = min(report.cover_witness_min_margin, margin)
            if margin <= 0:
                report.cover_witness_ok = False
        per_level.append(level_list)
    # round-robin enumeration across levels keeps bounded directions free of
    # spurious block trends in the tail diagnostics
    emitted: list[tuple[int, Certificate]] = []
    for i in range(max((len(lv) for lv in per_level), default=0)):
        for lv in per_level:
            if i < len(lv):
                emitted.append(lv[i])

    # in-sample pattern: each sample first seen at level k0 stays below k0 - 1
    first_seen: dict = {}
    for k, E_k, _, _ in staged:
        if E_k is None:
            continue
        for p in E_k.points:
            first_seen.setdefault(p.dedup_key(), (k, p))
    worst = 0.0
    for k0, p in first_seen.values():
        sup = 0.0
        for _, cert in emitted:
            sup = max(sup, bracket(cert.poly, p))
        bound = max(k0 - 1, 1)
        worst = max(worst, sup - bound)
        if sup > bound * (1.0 + 1e-9):
            report.in_sample_bound_ok = False
    report.in_sample_worst = worst

    if not emitted:
        return None, report
    comps = []
    top = -1
    for _, cert in emitted:
        base = cert.poly
        if isinstance(base, HomoPoly):
            base = PolyProduct(base.nvars, [(base, 1)])
        d = base.degree
        power = max(1, top // d + 1)
        comps.append(base.scaled_pow(power))
        top = power * d
    return FormalSeries(comps), report


def _default_probe_grid(K_list, budget: SearchBudget, count: int = 40):
    rng = budget.rng(0x9E)
    nvars = K_list[0].nvars
    probes = []
    raw = rng.normal(size=(count, nvars)) + 1j * rng.normal(size=(count, nvars))
    probes.extend(ProjPoint(row) for row in raw)
    for K in K_list:
        for p in K.points:
            jitter = 0.03 * (rng.normal(size=nvars) + 1j * rng.normal(size=nvars))
            probes.append(ProjPoint(p.coords + jitter))
    return probes


def build_series_main(K_list: list[SampledSet], cover_schedule, k_max: int,
                      eta: float = 0.35,
                      budget: SearchBudget = SearchBudget(),
                      ) -> tuple[FormalSeries | None, BuildReport]:
    """Series whose bounded directions are (the samples of) the union of the
    level sets of the input compacts.

    The level-k set is approximated by refutation absence: a probe point
    stays in the sampled level set of K_j when no certificate refutes its
    level-k membership within budget.  Cover points must avoid the inputs.
    """
    if k_max < 2:
        raise DomainError("k_max must be >= 2")
    covers = _normalize_schedule(cover_schedule, k_max)
    if not K_list:
        levels = [(k, None, covers[k]) for k in range(2, k_max + 1)]
        return assemble_series(levels, eta, budget)

    probes = _default_probe_grid(K_list, budget)
    levels = []
    for k in range(2, k_max + 1):
        members = []
        for K in K_list[:k] if len(K_list) > 1 else K_list:
            members.extend(K.points)
            for Z in probes:
                if K.contains(Z):
                    continue
                if refute_hull_level(K, Z, k, budget.with_steps(100)) is None:
                    members.append(Z)
        E_k = SampledSet(members, provenance="explicit")
        cover_k = [X for X in covers[k] if not E_k.contains(X)]
        levels.append((k, E_k, cover_k))
    return assemble_series(levels, eta, budget)


def _normalize_schedule(cover_schedule, k_max: int) -> dict:
    if isinstance(cover_schedule, dict):
        return {k: list(cover_schedule[k]) for k in range(2, k_max + 1)}
    cover_schedule = list(cover_schedule)
    if cover_schedule and isinstance(cover_schedule[0], ProjPoint):
        return {k: cover_schedule for k in range(2, k_max + 1)}
    covers = {}
    for k in range(2, k_max + 1):
        covers[k] = list(cover_schedule[k - 2]) if k - 2 < len(cover_schedule) else []
    return covers


# -- graph pipeline ------------------------------------------------------------


@dataclass
class GammaSpec:
    """Entire-function graph selector plus the planar compact pieces.

    psi_name "exp" enables the exponential tail certificates; any other
    entire function can be plugged as a callable but certificates then come
    from the generic factor families only.
    """

    W: list
    psi_name: str = "exp"
    psi: object = None

    def evaluate(self, z: complex) -> complex:
        if self.psi is not None:
            return self.psi(z)
        if self.psi_name == "exp":
            return cmath.exp(z)
        raise DomainError(f"unknown graph function {self.psi_name!r}")


def gamma_point(z: complex, spec: GammaSpec | None = None) -> ProjPoint:
    """Canonical representative of [1 : z : psi(z)], overflow safe.

    Components are damped by exp(-m) with m = max(0, Re z, log|z|) before
    normalization, so large real parts cannot overflow.
    """
    z = complex(z)
    if spec is None or (spec.psi is None and spec.psi_name == "exp"):
        m = max(0.0, z.real, math.log(abs(z)) if z != 0 else 0.0)
        return ProjPoint([math.exp(-m), z * math.exp(-m), cmath.exp(z - m)])
    return ProjPoint([1.0, z, spec.evaluate(z)])


def _sample_region_cells(region: GridRegion, limit: int) -> list[complex]:
    """Deterministic subsample of occupied cell centers, boundary first."""
    mask = region.mask
    from scipy import ndimage as _ndi
    interior = _ndi.binary_erosion(mask)
    boundary = mask & ~interior
    picks: list[complex] = []
    for layer in (boundary, interior):
        iy, ix = np.nonzero(layer)
        if iy.size == 0:
            continue
        room = max(0, limit - len(picks))
        if room == 0:
            break
        stride = max(1, int(math.ceil(iy.size / room)))
        for t in range(0, iy.size, stride):
            picks.append(region.origin + ix[t] * region.h + 1j * iy[t] * region.h)
    return picks[:limit]


@dataclass
class GammaReport:
    """Pipeline summary: planar construction checks plus the series report."""

    prop1016: object = None
    cover_hypothesis_ok: bool = False
    excess_areas: dict = field(default_factory=dict)
    build: BuildReport | None = None
    sample_z: dict = field(default_factory=dict)
    graph_cover_certified: dict = field(default_factory=dict)


def gamma_pipeline(spec: GammaSpec, k_max: int,
                   budget: SearchBudget = SearchBudget(
                       degree_cap=4096, max_clusters=1,
                       tail_orders=(32, 64, 128, 256, 512)),
                   sample_limit: int = 90,
                   cover_grid_step: float = 0.4,
                   cover_box: float = 2.2,
                   eta: float = 0.3,
                   graph_level_max: int = 2,
                   ambient_cover: int = 60,
                   graph_value_margin: float = 0.08,
                   graph_set_margin: float = 0.05,
                   ) -> tuple[FormalSeries | None, GammaReport]:
    """Ascending-graph pipeline: carve-and-hull on the planar pieces, map the
    stages onto the graph, check the open-cover hypothesis at finite level,
    and feed the sampled stages to the series assembler.

    Graph samples are held fixed across levels (the planar stages ascend, so
    the level-2 sample persists).  Covers are of two kinds: generic ambient
    directions get separation certificates through the exponential-tail
    family, while graph points on a planar grid away from the dilated stages
    get weak-form level certificates (set norm below 1 rather than tiny;
    points of the graph lie in the pluripolar hull of the sampled stage, so
    vanishing certificates cannot exist there and low levels are the honest
    reach of the construction).
    """
    if spec.psi is not None or spec.psi_name != "exp":
        raise DomainError("pipeline certificates require the exponential graph")
    for j, Wj in enumerate(spec.W):
        if not regions_equal(polynomial_hull(Wj), Wj):
            raise DomainError(f"input region {j} is not polynomially convex")
    traces, prop_report = prop1016_construct(spec.W, k_max)
    report = GammaReport(prop1016=prop_report)
    report.cover_hypothesis_ok = prop_report.excess_ok and prop_report.cover_ok
    report.excess_areas = dict(prop_report.excess_areas)

    # fixed core sample from the first stage, enriched by later stages
    core_z = _sample_region_cells(traces[min(1, len(traces) - 1)].F, sample_limit)
    report.sample_z["core"] = core_z
    rng = budget.rng(0x9A)

    from .planar_regions import distance as region_distance

    staged = []
    for tr in traces:
        if tr.k < 2:
            continue
        extra = [z for z in _sample_region_cells(tr.F, sample_limit // 4)
                 if all(abs(z - c) > 1e-12 for c in core_z)]
        zs = core_z + extra[:max(0, sample_limit - len(core_z))]
        E_k = SampledSet([gamma_point(z, spec) for z in zs], provenance="gamma-graph")
        ambient = rng.normal(size=(ambient_cover, 3)) + 1j * rng.normal(size=(ambient_cover, 3))
        cover = [ProjPoint(row) for row in ambient]
        cover = [X for X in cover if not E_k.contains(X)]
        certs, fails = build_hkj_system(E_k, cover, tr.k, eta, budget)
        if tr.k <= graph_level_max:
            graph_cover = []
            step = cover_grid_step
            for re_part in np.arange(-cover_box, cover_box + step / 2, step):
                for im_part in np.arange(-cover_box, cover_box + step / 2, step):
                    z = complex(round(re_part, 6), round(im_part, 6))
                    if region_distance(z, tr.V) <= 1.0 / (3.0 * tr.k) + 2 * tr.V.h:
                        continue
                    graph_cover.append((z, gamma_point(z, spec)))
            certified_z = []
            for idx, (z, X) in enumerate(graph_cover):
                if E_k.contains(X):
                    continue
                cert = graph_level_certificate(E_k, X, tr.k, budget,
                                               value_margin=graph_value_margin,
                                               set_margin=graph_set_margin)
                if cert is None:
                    fails = fails + [(10_000 + idx, f"graph cover at z={z} uncertified")]
                else:
                    cert.params["z"] = [z.real, z.imag]
                    certs.append(cert)
                    certified_z.append(z)
            report.graph_cover_certified[tr.k] = certified_z
        staged.append((tr.k, E_k, certs, fails))

    series, build = assemble_from_certs(staged)
    report.build = build
    return series, report


# -- serialization --------------------------------------------------------------


def series_to_text(f: FormalSeries) -> str:
    header = json.dumps({"format": "plurikit-series", "version": 1,
                         "n": f.nvars - 1, "truncation": f.truncation},
                        sort_keys=True)
    lines = [header]
    for comp in f.components:
        lines.append(json.dumps(_poly_to_obj(comp), sort_keys=True))
    return "\n".join(lines) + "\n"


def series_from_text(text: str) -> FormalSeries:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty series file")
    header = json.loads(lines[0])
    if header.get("format") != "plurikit-series":
        raise DomainError("not a series file")
    comps = [_poly_from_obj(json.loads(ln)) for ln in lines[1:]]
    return FormalSeries(comps, truncation=int(header["truncation"]))


def verdict_to_json(Z: ProjPoint, verdict: DirectionVerdict) -> str:
    return json.dumps({
        "Z": [[c.real, c.imag] for c in Z.coords],
        "status": verdict.status,
        "sup_seen": verdict.sup_seen,
        "growth_slope": verdict.growth_slope if math.isfinite(verdict.growth_slope) else None,
    }, sort_keys=True)
