"""Polynomial certificate search.

All certificates are built from a library of stable factors: unit linear
forms (including peak forms aimed at a point and null forms vanishing on a
sample span) and exponential-tail forms for graph-type sets.  A candidate is
an integer exponent vector over the library, normalized so that its
certified bracket sup is exactly 1; searches score candidates in log space,
so degree never causes overflow and vanishing factors never underflow.

Four searches are exposed: lower bounds for the constrained point gauge
Q_{K,Z}(t), point-separation certificates (bounded global norm, small set
norm, large point value), refutation of hull-level membership, and the
per-level certificate systems that the series constructions consume.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .homogeneous_algebra import (
    DEFAULT_DEGREE_CAP,
    ExpTailForm,
    HomoPoly,
    PolyProduct,
    ProjPoint,
    bracket,
    bracket_many,
    certified_sup_bound,
    gadget_form,
    homopoly_from_jsonl,
    homopoly_to_jsonl,
    interpolate_h,
    q_gadget,
)

_NEG_INF = float("-inf")
_LOG_FLOOR = -745.0   # below exp() underflow
_VANISH = -1.0e30     # sentinel log magnitude for exact vanishing
_VANISH_CUT = -1.0e20  # anything below this counts as vanished

PROVENANCES = ("planar-grid", "gamma-graph", "explicit")


@dataclass(frozen=True)
class SampledSet:
    """Finite sample of a compact set, deduplicated under canonical reps."""

    points: tuple
    provenance: str = "explicit"

    def __init__(self, points, provenance: str = "explicit"):
        if provenance not in PROVENANCES:
            raise DomainError(f"unknown provenance {provenance!r}")
        seen = {}
        for p in points:
            if not isinstance(p, ProjPoint):
                p = ProjPoint(p)
            seen.setdefault(p.dedup_key(), p)
        pts = tuple(seen.values())
        if not pts:
            raise DomainError("sampled set must be nonempty")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "provenance", provenance)

    def __len__(self):
        return len(self.points)

    @property
    def nvars(self) -> int:
        return self.points[0].nvars

    def matrix(self) -> np.ndarray:
        return np.array([p.coords for p in self.points])

    def contains(self, Z: ProjPoint, tol: float = 1e-9) -> bool:
        return any(p.same_point(Z, tol) for p in self.points)


def iota(z) -> ProjPoint:
    """Affine embedding z -> [1 : z] (any number of affine coordinates)."""
    return ProjPoint.from_affine(z)


def disk_samples(rho: float, boundary: int = 2048, rings: int = 4) -> SampledSet:
    """Deterministic sample of the closed disk |w| <= rho in the line."""
    pts = [iota(0.0)]
    for i in range(1, rings + 1):
        r = rho * i / rings
        n = boundary if i == rings else max(16, boundary // 8)
        ang = 2.0 * np.pi * np.arange(n) / n
        pts.extend(iota(r * complex(math.cos(a), math.sin(a))) for a in ang)
    return SampledSet(pts, provenance="planar-grid")


@dataclass(frozen=True)
class SearchBudget:
    """Reproducibility and effort limits for certificate searches."""

    degree_cap: int = 64
    ascent_steps: int = 2000
    seed: int = 0
    max_clusters: int | None = None
    tail_orders: tuple[int, ...] = (8, 16, 32, 64, 128, 256, 384)

    def rng(self, *salt: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence((self.seed,) + salt))

    def with_steps(self, steps: int) -> "SearchBudget":
        return SearchBudget(self.degree_cap, steps, self.seed,
                            self.max_clusters, self.tail_orders)

    def with_degree(self, cap: int) -> "SearchBudget":
        return SearchBudget(cap, self.ascent_steps, self.seed,
                            self.max_clusters, self.tail_orders)


@dataclass
class Certificate:
    """Witness record: a polynomial plus its measured norms and parameters.

    global_sup is a certified upper bound on the bracket sup (analytic for
    products of linear and tail factors); set_sup is a sampled lower bound of
    the true set sup; point_val is exact up to rounding.
    """

    poly: object
    global_sup: float
    set_sup: float
    point_val: float
    params: dict
    method: str = "analytic"
    seed: int = 0
    fallback: bool = False
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def reverify(self, K: SampledSet | None, Z: ProjPoint, tol: float = 1e-9) -> dict:
        """Recompute all stored quantities from the polynomial itself."""
        point = bracket(self.poly, Z)
        gsup, method = certified_sup_bound(self.poly)
        sset = 0.0
        if K is not None:
            sset = float(np.max(bracket_many(self.poly, K.points)))
        scale = max(1.0, abs(self.point_val), abs(self.global_sup))
        checks = {
            "point_val": abs(point - self.point_val) <= tol * scale,
            "global_sup": abs(gsup - self.global_sup) <= tol * scale,
            "set_sup": K is None or abs(sset - self.set_sup) <= tol * max(1.0, self.set_sup),
            "point_below_global": point <= gsup * (1.0 + tol) + tol,
        }
        checks["ok"] = all(checks.values())
        return checks


# -- factor library -----------------------------------------------------------


class _Library:
    """Factor library with per-sample log magnitudes, ready for scoring."""

    def __init__(self, nvars: int, samples: np.ndarray | None, x: np.ndarray):
        self.nvars = nvars
        self.samples = samples  # (P, nvars) canonical unit rows or None
        self.x = x
        self.forms: list = []          # HomoPoly | ExpTailForm
        self.kinds: list[str] = []     # peak / axis / null / cluster / tail
        self.degrees: list[int] = []
        self.log_sup: list[float] = [] # log sup |f(y)| over the unit sphere
        self.logs_S: list[np.ndarray] = []
        self.logs_X: list[float] = []

    def add_linear(self, a: np.ndarray, kind: str = "axis") -> int | None:
        norm = float(np.linalg.norm(a))
        if not math.isfinite(norm) or norm == 0.0:
            return None
        a = a / norm
        form = HomoPoly.linear_form(a)
        vals_X = abs(np.dot(self.x, a))
        if self.samples is not None:
            with np.errstate(divide="ignore"):
                logs = np.log(np.abs(self.samples @ a))
            logs = np.where(np.isfinite(logs), logs, _VANISH)
        else:
            logs = np.empty(0)
        self.forms.append(form)
        self.kinds.append(kind)
        self.degrees.append(1)
        self.log_sup.append(0.0)
        self.logs_S.append(logs)
        self.logs_X.append(math.log(vals_X) if vals_X > 0 else _VANISH)
        return len(self.forms) - 1

    def add_tail(self, m: int) -> int:
        form = ExpTailForm(m)
        if self.samples is not None:
            logs = np.array([form.log_abs_at(row) for row in self.samples])
            logs = np.where(np.isfinite(logs), logs, _VANISH)
        else:
            logs = np.empty(0)
        lx = form.log_abs_at(self.x)
        self.forms.append(form)
        self.kinds.append("tail")
        self.degrees.append(m)
        self.log_sup.append(math.log(form.sup_upper_bound()))
        self.logs_S.append(logs)
        self.logs_X.append(lx if math.isfinite(lx) else _VANISH)
        return len(self.forms) - 1

    def finalize(self):
        self.degrees = np.array(self.degrees, dtype=int)
        self.log_sup = np.array(self.log_sup, dtype=float)
        self.logs_X = np.array(self.logs_X, dtype=float)
        if self.samples is not None and len(self.forms):
            self.S = np.vstack([ls[None, :] for ls in self.logs_S])
        else:
            self.S = np.empty((len(self.forms), 0))

    def score(self, e: np.ndarray) -> tuple[float, float, int]:
        """(log point value, log sampled set sup, degree) of the normalized
        candidate with exponents e; certified bracket sup is exactly 1.
        Logs below the vanish cutoff mean an exact structural zero."""
        D = int(e @ self.degrees)
        if D <= 0:
            return _NEG_INF, _NEG_INF, 0
        shift = e @ self.log_sup
        logV = (e @ self.logs_X - shift) / D
        if self.S.shape[1]:
            logM = (np.max(e @ self.S) - shift) / D
        else:
            logM = _NEG_INF
        return float(logV), float(logM), D

    def build(self, e: np.ndarray, extra_log_scale: float = 0.0) -> PolyProduct:
        shift = float(e @ self.log_sup)
        factors = [(self.forms[i], int(e[i])) for i in np.nonzero(e)[0]]
        return PolyProduct(self.nvars, factors, log_scale=-shift + extra_log_scale)

    def structured_candidates(self, max_degree: int) -> list[np.ndarray]:
        """Seed pool: single factors, the full cluster-vanishing product, and
        peak-boosted copies (the boost drags the point value toward 1 while
        every sample keeps a vanishing factor)."""
        n = len(self.forms)
        kinds = self.kinds
        peak = next((i for i, k in enumerate(kinds) if k == "peak"), None)
        out = []
        for i in range(n):
            e = np.zeros(n, dtype=int)
            e[i] = 1
            out.append(e)
        bases = []
        for group in ("cluster", "root"):
            members = [i for i, k in enumerate(kinds) if k == group]
            if members:
                e = np.zeros(n, dtype=int)
                for i in members:
                    e[i] = 1
                bases.append(e)
        for i, k in enumerate(kinds):
            if k in ("null", "tail"):
                e = np.zeros(n, dtype=int)
                e[i] = 1
                bases.append(e)
        for e in list(bases):
            out.append(e)
            if peak is None:
                continue
            base_deg = int(e @ self.degrees)
            boost = 1
            while base_deg + boost <= max_degree and boost <= 512:
                eb = e.copy()
                eb[peak] += boost
                out.append(eb)
                boost *= 2
        return out


def _lp_seed(lib: _Library, log_v_need: float, log_m_need: float,
             degree_targets: tuple[int, ...]) -> list[np.ndarray]:
    """LP-optimal continuous exponents, rounded to integer candidates.

    After normalizing the total degree to 1, both the log point value and
    every per-sample log value are linear in the exponent vector, so the
    max-margin certificate is a linear program; rounding at a few degree
    scales recovers integer candidates.
    """
    try:
        from scipy.optimize import linprog
    except ImportError:  # pragma: no cover
        return []
    n = len(lib.forms)
    if n == 0:
        return []
    # clip vanishing logs at a modest depth: structural zeros then cost real
    # exponent weight in the LP, so rounding cannot silently drop them
    lX = np.maximum(lib.logs_X - lib.log_sup, -50.0)
    lS = np.maximum(lib.S - lib.log_sup[:, None], -50.0) if lib.S.shape[1] else None
    d = lib.degrees.astype(float)
    # variables: e_0..e_{n-1}, t;  maximize t
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = [np.concatenate([-lX, [1.0]])]
    b_ub = [-log_v_need]
    if lS is not None:
        for s in range(lS.shape[1]):
            A_ub.append(np.concatenate([lS[:, s], [1.0]]))
            b_ub.append(log_m_need)
    A_eq = [np.concatenate([d, [0.0]])]
    b_eq = [1.0]
    bounds = [(0.0, None)] * n + [(None, None)]
    res = linprog(c, A_ub=np.array(A_ub), b_ub=np.array(b_ub),
                  A_eq=np.array(A_eq), b_eq=np.array(b_eq), bounds=bounds,
                  method="highs")
    if not res.success or res.x is None:
        return []
    e_star = np.maximum(res.x[:n], 0.0)
    seeds = []
    for target in degree_targets:
        e_int = np.round(e_star * target).astype(int)
        if int(e_int @ lib.degrees) > 0:
            seeds.append(e_int)
    return seeds


def _null_space_small(A: np.ndarray) -> np.ndarray:
    """Orthonormal null-space basis (columns); avoids the full M x M factor."""
    wide = A.shape[0] < A.shape[1]
    _, s, vh = np.linalg.svd(A, full_matrices=wide)
    tol = max(A.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def _null_form_vectors(samples: np.ndarray, x: np.ndarray) -> list[np.ndarray]:
    """Unit forms vanishing on the sample span, best-aligned with x first."""
    if samples.shape[0] == 0:
        return [np.conj(x)]
    ns = _null_space_small(samples)
    if ns.size == 0:
        return []
    v = ns.T @ x
    norm = float(np.linalg.norm(v))
    out = []
    if norm > 1e-14:
        out.append(ns @ np.conj(v) / norm)
    else:
        out.append(ns[:, 0])
    return out


def _greedy_clusters(samples: np.ndarray, max_size: int, max_clusters: int) -> list[list[int]] | None:
    """Deterministic proximity clustering with bounded cluster size."""
    order = range(samples.shape[0])
    clusters: list[list[int]] = []
    for idx in order:
        best, best_d = None, math.inf
        for ci, members in enumerate(clusters):
            if len(members) >= max_size:
                continue
            d = min(abs(1.0 - abs(np.vdot(samples[m], samples[idx]))) for m in members)
            if d < best_d:
                best, best_d = ci, d
        if best is not None and best_d < 0.02:
            clusters[best].append(idx)
        else:
            clusters.append([idx])
        if len(clusters) > max_clusters:
            return None
    return clusters


def _build_library(K: SampledSet | None, Z: ProjPoint, budget: SearchBudget,
                   for_gamma: bool | None = None) -> _Library:
    nvars = Z.nvars
    S = K.matrix() if K is not None else None
    lib = _Library(nvars, S, Z.coords)
    # peak form aimed at Z and the coordinate axes
    lib.add_linear(np.conj(Z.coords), kind="peak")
    for i in range(nvars):
        e = np.zeros(nvars, dtype=complex)
        e[i] = 1.0
        lib.add_linear(e, kind="axis")
    if S is not None:
        for a in _null_form_vectors(S, Z.coords):
            lib.add_linear(a, kind="null")
        max_cl = budget.max_clusters or max(1, budget.degree_cap // 4)
        clusters = _greedy_clusters(S, nvars - 1, max_cl)
        if clusters is not None and len(clusters) > 1:
            for members in clusters:
                for a in _null_form_vectors(S[members], Z.coords):
                    lib.add_linear(a, kind="cluster")
    gamma = (K is not None and K.provenance == "gamma-graph") if for_gamma is None else for_gamma
    if gamma and nvars == 3:
        for m in budget.tail_orders:
            if m <= budget.degree_cap:
                lib.add_tail(m)
        if S is not None:
            # planar root forms y1 - c*y0 at a coarse grid of the sample
            # affine coordinates; these give Green-type suppression on the
            # planar footprint of graph samples
            zs = np.array([row[1] / row[0] for row in S if abs(row[0]) > 1e-9])
            for c in _coarse_roots(zs, 24):
                lib.add_linear(np.array([-c, 1.0, 0.0], dtype=complex), kind="root")
    lib.finalize()
    return lib


def _coarse_roots(zs: np.ndarray, limit: int) -> list[complex]:
    """Deterministic coarse subset of planar points (greedy farthest-first)."""
    if zs.size == 0:
        return []
    picks = [complex(zs[0])]
    while len(picks) < min(limit, zs.size):
        dists = np.min(np.abs(zs[:, None] - np.array(picks)[None, :]), axis=1)
        idx = int(np.argmax(dists))
        if dists[idx] < 1e-9:
            break
        picks.append(complex(zs[idx]))
    return picks


def _ascend(lib: _Library, e0: np.ndarray, objective, budget: SearchBudget,
            rng: np.random.Generator, collect: list):
    """Integer hill climb on exponent vectors; collects visited candidates."""
    e = e0.copy()
    best = objective(e)
    collect.append(e.copy())
    n = len(e)
    steps = max(0, budget.ascent_steps)
    for _ in range(steps):
        i = int(rng.integers(n))
        delta = 1 if rng.random() < 0.5 else -1
        if e[i] + delta < 0:
            continue
        e[i] += delta
        if int(e @ lib.degrees) > budget.degree_cap:
            e[i] -= delta
            continue
        cand = objective(e)
        if cand > best:
            best = cand
            collect.append(e.copy())
        else:
            e[i] -= delta
    return collect


# -- searches -----------------------------------------------------------------


def q_lower_bound(K: SampledSet, Z: ProjPoint, t: float,
                  budget: SearchBudget = SearchBudget()) -> Certificate:
    """Best found lower bound for the constrained point gauge at parameter t.

    Every candidate has certified bracket sup exactly 1 before scaling; the
    scaled copy gamma * p keeps sup <= 1, drives the sampled set sup under t
    and reports gamma * value(Z) as the bound.  The candidate pool does not
    depend on t, so the reported bound is nondecreasing in t.
    """
    if not (0.0 < t <= 1.0):
        raise DomainError("t must lie in (0, 1]")
    if K.contains(Z):
        raise DomainError("point lies in the sampled set")
    if K.nvars != Z.nvars:
        raise DomainError("dimension mismatch between set and point")
    lib = _build_library(K, Z, budget)
    rng = budget.rng(0x71)

    pool = lib.structured_candidates(budget.degree_cap)
    # fixed reference scales keep the pool independent of the requested t
    for log_t_ref in (0.0, -1.0, -2.3, -3.5, -4.6):
        def objective(e, ref=log_t_ref):
            logV, logM, D = lib.score(e)
            if D == 0 or logV <= _VANISH_CUT:
                return _NEG_INF
            g = min(0.0, ref - logM) if logM > _VANISH_CUT else 0.0
            return g + logV
        seed_e = max(pool, key=objective).copy()
        _ascend(lib, seed_e, objective, budget.with_steps(budget.ascent_steps // 5),
                rng, pool)

    log_t = math.log(t)
    best = None
    for e in pool:
        logV, logM, D = lib.score(e)
        if D == 0 or logV <= _VANISH_CUT:
            continue
        log_gamma = min(0.0, log_t - logM) if logM > _VANISH_CUT else 0.0
        value = math.exp(log_gamma + logV) if log_gamma + logV > _LOG_FLOOR else 0.0
        if best is None or value > best[0]:
            best = (value, e, logV, logM, log_gamma, D)

    if best is None or best[0] <= t:
        poly = HomoPoly.constant(t, Z.nvars)
        return Certificate(poly=poly, global_sup=t, set_sup=t, point_val=t,
                           params={"t": t}, seed=budget.seed, fallback=True)
    value, e, logV, logM, log_gamma, D = best
    log_gamma += math.log1p(-1e-12)  # keep the scaled copy strictly feasible
    poly = lib.build(e, extra_log_scale=D * log_gamma)
    set_sup = float(np.max(bracket_many(poly, K.points)))
    point_val = bracket(poly, Z)
    if set_sup > t:
        poly = HomoPoly.constant(t, Z.nvars)
        return Certificate(poly=poly, global_sup=t, set_sup=t, point_val=t,
                           params={"t": t}, seed=budget.seed, fallback=True)
    return Certificate(poly=poly, global_sup=math.exp(log_gamma), set_sup=set_sup,
                       point_val=point_val, params={"t": t}, seed=budget.seed)


def property_j_certificate(K: SampledSet, X: ProjPoint, eta: float, eps: float,
                           budget: SearchBudget = SearchBudget()) -> Certificate:
    """Search for p with certified sup <= 1, sampled set sup <= eps and point
    value > eta.  A failure report is returned when the budget runs out; that
    is not a disproof, the separation property is only semi-verified.
    """
    if not (0.0 < eta < 1.0):
        raise DomainError("eta must lie in (0, 1)")
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    if K.contains(X):
        raise DomainError("point lies in the sampled set")
    lib = _build_library(K, X, budget)
    rng = budget.rng(0x7A)
    log_eta, log_eps = math.log(eta), (math.log(eps) if eps > 0 else _NEG_INF)

    def margin(e):
        logV, logM, D = lib.score(e)
        if D == 0 or logV <= _VANISH_CUT:
            return _NEG_INF
        m_point = logV - log_eta
        if eps > 0.0:
            m_set = (log_eps - logM) if logM > _VANISH_CUT else math.inf
        else:
            m_set = math.inf if logM <= _VANISH_CUT else -math.inf
        return min(m_point, m_set)

    pool = lib.structured_candidates(budget.degree_cap)
    seed_e = max(pool, key=margin).copy()
    _ascend(lib, seed_e, margin, budget, rng, pool)

    best_e = max(pool, key=margin)
    best_margin = margin(best_e)
    logV, logM, D = lib.score(best_e)
    poly = lib.build(best_e)
    point_val = bracket(poly, X)
    set_sup = float(np.max(bracket_many(poly, K.points)))
    cert = Certificate(poly=poly, global_sup=1.0, set_sup=set_sup,
                       point_val=point_val,
                       params={"eta": eta, "eps": eps, "degree": D},
                       seed=budget.seed)
    if not (best_margin > 0.0 and point_val > eta and set_sup <= eps):
        cert.failure = (f"no certificate within budget: best value {point_val:.3g}, "
                        f"set sup {set_sup:.3g} against eta={eta}, eps={eps:.3g}")
    return cert


def refute_hull_level(K: SampledSet, Z: ProjPoint, m: int,
                      budget: SearchBudget = SearchBudget()) -> Certificate | None:
    """One-sided refutation of hull-level-m membership relative to the sample.

    A returned certificate exhibits p with
        value(Z) > e**m * sup(p)**(1-1/m) * set_sup(p)**(1/m),
    which no point of the level-m set can satisfy.  None means undecided.
    """
    if m < 1:
        raise DomainError("level must be >= 1")
    if K.contains(Z):
        return None
    lib = _build_library(K, Z, budget)
    rng = budget.rng(0x52)

    def gain(e):
        logV, logM, D = lib.score(e)
        if D == 0 or logV <= _VANISH_CUT:
            return _NEG_INF
        if logM <= _VANISH_CUT:
            return math.inf
        return logV - (m + logM / m)

    pool = lib.structured_candidates(budget.degree_cap)
    seed_e = max(pool, key=gain).copy()
    _ascend(lib, seed_e, gain, budget, rng, pool)
    best_e = max(pool, key=gain)
    if gain(best_e) <= 0.0:
        return None
    poly = lib.build(best_e)
    point_val = bracket(poly, Z)
    set_sup = float(np.max(bracket_many(poly, K.points)))
    gsup, _ = certified_sup_bound(poly)
    rhs = math.exp(m) * gsup ** (1.0 - 1.0 / m) * set_sup ** (1.0 / m)
    if not point_val > rhs * (1.0 + 1e-9):
        return None
    return Certificate(poly=poly, global_sup=gsup, set_sup=set_sup,
                       point_val=point_val, params={"level": m, "rhs": rhs},
                       seed=budget.seed)


def _best_beta_in_window(lo: float, hi: float, b_max: int) -> tuple[int, int] | None:
    """Largest coprime a/b in [lo, hi) with denominator b <= b_max."""
    best = None
    for b in range(2, b_max + 1):
        a_hi = math.ceil(hi * b) - 1
        for a in range(min(a_hi, b - 1), 0, -1):
            r = a / b
            if r < lo:
                break
            if r < hi and math.gcd(a, b) == 1:
                if best is None or r > best[0] / best[1]:
                    best = (a, b)
                break
    return best


def build_hkj_system(E_k: SampledSet | None, cover: list[ProjPoint], k: int,
                     eta: float, budget: SearchBudget = SearchBudget(),
                     ) -> tuple[list[Certificate], list[tuple[int, str]]]:
    """Per cover point: a separation certificate p, the peak gadget q of the
    same degree, and the interpolation h = p**a q**(b-a) with beta = a/b the
    largest small-denominator rational making (eta/k)**beta > 1/2.

    Emitted certificates satisfy, re-verified numerically,
        (i)  set sup of h over the sample <= k**(-beta) < 1,
        (ii) certified sup of h <= k,
        (iii) value of h at the cover point > k/2.
    Failures are collected per cover index; the result may be partial.
    """
    if k < 2:
        raise DomainError("level k must be >= 2 (need k/2 < eta * k)")
    if not (0.0 < eta < 1.0):
        raise DomainError("eta must lie in (0, 1)")
    certs: list[Certificate] = []
    failures: list[tuple[int, str]] = []
    for idx, X in enumerate(cover):
        if E_k is not None and E_k.contains(X):
            failures.append((idx, "cover point lies in the level set"))
            continue
        cert_h = _build_single_h(E_k, X, k, eta, budget)
        if isinstance(cert_h, str):
            failures.append((idx, cert_h))
        else:
            cert_h.params["cover_index"] = idx
            certs.append(cert_h)
    return certs, failures


def _build_single_h(E_k, X, k, eta, budget):
    if E_k is None:
        p = PolyProduct(X.nvars, [(HomoPoly.linear_form(np.conj(X.coords)), 1)])
        v = bracket(p, X)
        candidates = [(p, v, 0.0)]
    else:
        candidates = []
        # leave degree room for the interpolation denominator b >= 8
        p_budget = budget.with_degree(max(2, budget.degree_cap // 8))
        # a few set-norm tiers; one search each, beta picked from the window
        for log_eps in (-3.0 * math.log(k), -6.0 * math.log(k), -math.log(k)):
            cert = property_j_certificate(E_k, X, eta, math.exp(log_eps), p_budget)
            if cert.point_val > eta:
                candidates.append((cert.poly, cert.point_val, cert.set_sup))
            if cert.ok:
                break
    tried = []
    for p, v, v_set in candidates:
        if v <= eta:
            tried.append(f"point value {v:.3g} below eta={eta}")
            continue
        # (eta/k)^beta > 1/2 keeps the cover value above k/2 with headroom
        # (v/eta)^beta; the set side needs set value <= k^(-1/beta).
        beta_hi = math.log(2.0) / math.log(k / eta)
        beta_lo = 0.0 if v_set <= 0.0 else math.log(k) / math.log(1.0 / v_set)
        if v_set >= 1.0:
            tried.append(f"set value {v_set:.3g} not below 1")
            continue
        d = max(1, p.degree)
        b_max = min(64, budget.degree_cap // d)
        ab = _best_beta_in_window(beta_lo * (1.0 + 1e-9) + 1e-12, beta_hi, b_max)
        if ab is None:
            tried.append(
                f"no coprime exponent in window [{beta_lo:.3g}, {beta_hi:.3g}) "
                f"with denominator <= {b_max}")
            continue
        a, b = ab
        beta = a / b
        eps = k ** (-1.0 / beta)
        q = PolyProduct(X.nvars, [(gadget_form(X, k), d)])
        h = interpolate_h(p, q, a, b)
        h_point = bracket(h, X)
        h_sup, _ = certified_sup_bound(h)
        h_set = (float(np.max(bracket_many(h, E_k.points)))
                 if E_k is not None else 0.0)
        bound_i = k ** (-beta)
        if h_point > k / 2.0 and h_sup <= k * (1.0 + 1e-9) and h_set <= bound_i * (1.0 + 1e-9):
            return Certificate(
                poly=h, global_sup=h_sup, set_sup=h_set, point_val=h_point,
                params={"eta": eta, "eps": eps, "k": k, "beta": (a, b),
                        "p_point_val": v, "set_bound": bound_i},
                seed=budget.seed)
        tried.append(
            f"beta={a}/{b}: h checks failed (point {h_point:.3g} vs {k / 2}, "
            f"set {h_set:.3g} vs {bound_i:.3g})")
    return "; ".join(tried[-3:]) if tried else "no candidate value above eta"


def graph_level_certificate(E_k: SampledSet, X: ProjPoint, k: int,
                            budget: SearchBudget = SearchBudget(),
                            value_margin: float = 0.08,
                            set_margin: float = 0.15) -> Certificate | None:
    """Weak-form level certificate: certified sup <= k, sampled set sup < 1,
    point value > k/2.

    Unlike the separation route, the set norm is not driven toward zero, so
    these certificates exist even at points inside the pluripolar hull of
    the sampled set (for instance on the graph of an entire function just
    outside its planar footprint, where vanishing certificates cannot
    exist).  The search asks for (1 + value_margin)/2 and (1 - set_margin)/k
    in normalized units to keep a classification margin.
    """
    if k < 2:
        raise DomainError("level k must be >= 2")
    if E_k.contains(X):
        return None
    lib = _build_library(E_k, X, budget)
    rng = budget.rng(0x6C)
    log_v_need = math.log((1.0 + value_margin) / 2.0)
    log_m_need = math.log((1.0 - set_margin) / k)

    def margin(e):
        logV, logM, D = lib.score(e)
        if D == 0 or logV <= _VANISH_CUT:
            return _NEG_INF
        m_set = (log_m_need - logM) if logM > _VANISH_CUT else math.inf
        return min(logV - log_v_need, m_set)

    pool = lib.structured_candidates(budget.degree_cap)
    pool.extend(e for e in _lp_seed(lib, log_v_need, log_m_need, (32, 64, 128, 256))
                if int(e @ lib.degrees) <= budget.degree_cap)
    seed_e = max(pool, key=margin).copy()
    _ascend(lib, seed_e, margin, budget, rng, pool)
    best_e = max(pool, key=margin)
    if margin(best_e) <= 0.0:
        return None
    D = int(best_e @ lib.degrees)
    poly = lib.build(best_e, extra_log_scale=D * math.log(k))
    point_val = bracket(poly, X)
    set_sup = float(np.max(bracket_many(poly, E_k.points)))
    gsup, _ = certified_sup_bound(poly)
    if not (point_val > k / 2.0 and set_sup < 1.0 and gsup <= k * (1.0 + 1e-9)):
        return None
    return Certificate(poly=poly, global_sup=gsup, set_sup=set_sup,
                       point_val=point_val,
                       params={"k": k, "kind": "graph-level"},
                       seed=budget.seed)


# -- serialization -------------------------------------------------------------


def _poly_to_obj(p) -> dict:
    if isinstance(p, HomoPoly):
        return {"kind": "poly", "jsonl": homopoly_to_jsonl(p)}
    if isinstance(p, ExpTailForm):
        return {"kind": "exp-tail", "m": p.m}
    if isinstance(p, PolyProduct):
        return {"kind": "product", "log_scale": p.log_scale, "phase": p.phase,
                "nvars": p.nvars,
                "factors": [{"power": power, "base": _poly_to_obj(base)}
                            for base, power in p.factors]}
    raise DomainError(f"cannot serialize {type(p).__name__}")


def _poly_from_obj(obj: dict):
    kind = obj["kind"]
    if kind == "poly":
        return homopoly_from_jsonl(obj["jsonl"])
    if kind == "exp-tail":
        return ExpTailForm(int(obj["m"]))
    if kind == "product":
        factors = [(_poly_from_obj(f["base"]), int(f["power"])) for f in obj["factors"]]
        return PolyProduct(int(obj["nvars"]), factors,
                           log_scale=float(obj["log_scale"]), phase=float(obj["phase"]))
    raise DomainError(f"unknown polynomial record kind {kind!r}")


def certificate_to_json(cert: Certificate) -> str:
    params = dict(cert.params)
    if "beta" in params:
        params["beta"] = list(params["beta"])
    return json.dumps({
        "format-version": 1,
        "poly": _poly_to_obj(cert.poly),
        "global_sup": cert.global_sup,
        "set_sup": cert.set_sup,
        "point_val": cert.point_val,
        "params": params,
        "method": cert.method,
        "seed": cert.seed,
        "fallback": cert.fallback,
        "failure": cert.failure,
    }, sort_keys=True)


def certificate_from_json(text: str, K: SampledSet | None = None,
                          Z: ProjPoint | None = None,
                          verify: bool = True) -> Certificate:
    obj = json.loads(text)
    params = dict(obj["params"])
    if "beta" in params:
        params["beta"] = tuple(params["beta"])
    cert = Certificate(
        poly=_poly_from_obj(obj["poly"]),
        global_sup=float(obj["global_sup"]),
        set_sup=float(obj["set_sup"]),
        point_val=float(obj["point_val"]),
        params=params,
        method=obj.get("method", "analytic"),
        seed=int(obj.get("seed", 0)),
        fallback=bool(obj.get("fallback", False)),
        failure=obj.get("failure"),
    )
    if verify and Z is not None:
        checks = cert.reverify(K, Z)
        if not checks["ok"]:
            raise DomainError(f"stored certificate failed re-verification: {checks}")
    return cert
