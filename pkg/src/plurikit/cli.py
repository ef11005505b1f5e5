"""Command-line front end.

Every subcommand is reproducible: a 64-bit seed enters every search, the
PLURIKIT_SEED environment variable overrides the flag, and each output file
carries a format-version line plus the seed and a hash of the run
configuration, so identical configurations produce byte-identical files.

Exit codes: 0 success, 2 domain error (bad input), 3 budget exhaustion or
partial result (outputs are still written with a status field), 64 usage
error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .errors import BudgetExhausted, DomainError
from .homogeneous_algebra import ProjPoint, projpoint_from_json
from . import radial_extremal as radial
from . import planar_regions as regions
from . import certificates as certs
from . import series_lab as series_lab

FORMAT_VERSION = 1


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _config_hash(args: argparse.Namespace) -> str:
    payload = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _stamp(args) -> str:
    return f"format-version {FORMAT_VERSION} seed {args.seed} config {_config_hash(args)}"


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _floats(raw: str) -> list[float]:
    return [float(x) for x in raw.split(",") if x.strip()]


def _load_point(raw: str) -> ProjPoint:
    return projpoint_from_json(raw)


def _load_sample_set(path: str) -> certs.SampledSet:
    obj = json.loads(Path(path).read_text())
    pts = [projpoint_from_json(p) for p in obj["points"]]
    return certs.SampledSet(pts, provenance=obj.get("provenance", "explicit"))


def write_sample_set(path: str, sset: certs.SampledSet, seed: int = 0):
    obj = {
        "format-version": FORMAT_VERSION,
        "seed": seed,
        "provenance": sset.provenance,
        "points": [[[c.real, c.imag] for c in p.coords] for p in sset.points],
    }
    Path(path).write_text(json.dumps(obj, sort_keys=True))


def _budget(args) -> certs.SearchBudget:
    return certs.SearchBudget(degree_cap=args.degree_cap, ascent_steps=args.steps,
                              seed=args.seed)


# -- subcommands ---------------------------------------------------------------


def _cmd_extremal_ball(args) -> int:
    lines = [f"# plurikit-csv {_stamp(args)}", "rho,s,r,sigma_star,branch,lambda"]
    for r in _floats(args.r):
        value, branch, lam = radial.sigma_star_ball_detail(
            radial.RadialParams(args.rho, args.s, r))
        lam_txt = repr(lam) if (branch == 2 and lam is not None) else ""
        lines.append(f"{args.rho!r},{args.s!r},{r!r},{value!r},{branch},{lam_txt}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_lambda_table(args) -> int:
    lines = [f"# plurikit-csv {_stamp(args)}", "rho,s,lambda,residual"]
    for rho in _floats(args.rho):
        for frac in _floats(args.s_frac):
            s = frac * radial.s_threshold(rho)
            lam = radial.solve_lambda(rho, s)
            res = radial.lm_residual(rho, s, lam)
            lines.append(f"{rho!r},{s!r},{lam!r},{res!r}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_envelope_check(args) -> int:
    rho, s = args.rho, args.s
    if args.T is not None:
        T = args.T
    else:
        lam = (radial.solve_lambda(rho, s)
               if 0.0 < s < radial.s_threshold(rho) else math.log(rho))
        T = max(lam + 3.0, math.log(rho) + 6.0)
    table = radial.convex_envelope_oracle(rho, s, args.grid, T, refine=args.refine)
    closed = radial.envelope_closed_form(rho, s, table.grid)
    gap = float(np.max(np.abs(table.v_values - closed)))
    lines = [f"# plurikit-csv {_stamp(args)}", "t,w,v,closed_form,gap"]
    for t, w, v, u in zip(table.grid, table.w_values, table.v_values, closed):
        lines.append(f"{t!r},{w!r},{v!r},{u!r},{v - u!r}")
    lines.append(f"# sup_gap {gap!r}")
    _write(args.out, "\n".join(lines) + "\n")
    print(f"sup gap {gap:.3e}")
    return 0


def _region_io(args, transform) -> int:
    region = regions.region_from_text(Path(args.infile).read_text())
    result = transform(region)
    text = f"# {_stamp(args)}\n" + regions.region_to_text(result)
    _write(args.out, text)
    return 0


def _cmd_hull(args) -> int:
    return _region_io(args, regions.polynomial_hull)


def _cmd_dilate(args) -> int:
    return _region_io(args, lambda r: regions.neighborhood(r, args.radius))


def _cmd_prop1016(args) -> int:
    W = [regions.region_from_text(Path(p).read_text()) for p in args.infiles]
    traces, report = regions.prop1016_construct(W, args.kmax)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for tr in traces:
        (outdir / f"F_{tr.k:03d}.rgn").write_text(regions.region_to_text(tr.F))
        (outdir / f"V_{tr.k:03d}.rgn").write_text(regions.region_to_text(tr.V))
    payload = {
        "format-version": FORMAT_VERSION,
        "seed": args.seed,
        "config": _config_hash(args),
        "ascending_ok": report.ascending_ok,
        "inside_union_ok": report.inside_union_ok,
        "disjoint_ok": report.disjoint_ok,
        "hull_union_ok": report.hull_union_ok,
        "cover_gap": report.cover_gap,
        "cover_ok": report.cover_ok,
        "excess_areas": {str(k): v for k, v in report.excess_areas.items()},
        "shell_area": report.shell_area,
        "excess_ok": report.excess_ok,
    }
    (outdir / "report.json").write_text(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_certify_j(args) -> int:
    K = _load_sample_set(args.set)
    X = _load_point(args.point)
    cert = certs.property_j_certificate(K, X, args.eta, args.eps, _budget(args))
    _write(args.out, certs.certificate_to_json(cert) + "\n")
    if not cert.ok:
        print(f"status partial: {cert.failure}", file=sys.stderr)
        return 3
    return 0


def _cmd_q_bound(args) -> int:
    K = _load_sample_set(args.set)
    Z = _load_point(args.point)
    cert = certs.q_lower_bound(K, Z, args.t, _budget(args))
    _write(args.out, certs.certificate_to_json(cert) + "\n")
    return 0


def _cmd_refute_level(args) -> int:
    K = _load_sample_set(args.set)
    Z = _load_point(args.point)
    cert = certs.refute_hull_level(K, Z, args.level, _budget(args))
    if cert is None:
        _write(args.out, json.dumps({"format-version": FORMAT_VERSION,
                                     "seed": args.seed,
                                     "status": "undecided"}, sort_keys=True) + "\n")
        return 3
    _write(args.out, certs.certificate_to_json(cert) + "\n")
    return 0


def _cmd_build_series(args) -> int:
    K_list = [_load_sample_set(p) for p in args.sets]
    rng = np.random.default_rng(args.seed)
    nvars = K_list[0].nvars if K_list else 3
    cover = []
    while len(cover) < args.cover_count:
        X = ProjPoint(rng.normal(size=nvars) + 1j * rng.normal(size=nvars))
        if all(min(X.angle_to(p) for p in K.points) > 0.1 for K in K_list):
            cover.append(X)
    f, report = series_lab.build_series_main(K_list, cover, args.kmax,
                                             eta=args.eta, budget=_budget(args))
    status = "ok" if (f is not None and not report.failures) else "partial"
    if f is not None:
        _write(args.out, f"# {_stamp(args)}\n" + series_lab.series_to_text(f))
    if args.report:
        payload = {
            "format-version": FORMAT_VERSION,
            "seed": args.seed,
            "config": _config_hash(args),
            "status": status,
            "certificates": report.certificates,
            "failures": len(report.failures),
            "in_sample_bound_ok": report.in_sample_bound_ok,
            "cover_witness_ok": report.cover_witness_ok,
        }
        Path(args.report).write_text(json.dumps(payload, sort_keys=True))
    if f is None:
        print("status partial: no certificates emitted", file=sys.stderr)
        return 3
    return 0 if status == "ok" else 3


def _cmd_test_convergence(args) -> int:
    text = Path(args.series).read_text()
    body = "\n".join(ln for ln in text.splitlines() if not ln.startswith("#"))
    f = series_lab.series_from_text(body)
    points = [_load_point(raw) for raw in args.point]
    config = series_lab.MembershipConfig()

    def classify(Z):
        return series_lab.conv_membership(f, Z, args.threshold, config)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            verdicts = list(pool.map(classify, points))
    else:
        verdicts = [classify(Z) for Z in points]
    lines = [f"# plurikit-verdicts {_stamp(args)}"]
    for Z, v in zip(points, verdicts):
        lines.append(series_lab.verdict_to_json(Z, v))
    _write(args.out, "\n".join(lines) + "\n")
    for v in verdicts:
        print(v.status)
    return 0


def _cmd_gamma_pipeline(args) -> int:
    W = [regions.region_from_text(Path(p).read_text()) for p in args.regions]
    spec = series_lab.GammaSpec(W=W)
    budget = certs.SearchBudget(degree_cap=args.degree_cap, ascent_steps=args.steps,
                                seed=args.seed, max_clusters=1,
                                tail_orders=(32, 64, 128, 256, 512))
    f, report = series_lab.gamma_pipeline(spec, args.kmax, budget=budget)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if f is not None:
        (outdir / "series.txt").write_text(f"# {_stamp(args)}\n"
                                           + series_lab.series_to_text(f))
    build = report.build
    payload = {
        "format-version": FORMAT_VERSION,
        "seed": args.seed,
        "config": _config_hash(args),
        "status": "ok" if f is not None else "partial",
        "cover_hypothesis_ok": report.cover_hypothesis_ok,
        "excess_areas": {str(k): v for k, v in report.excess_areas.items()},
        "certificates": build.certificates if build else 0,
        "failures": len(build.failures) if build else 0,
        "graph_cover_certified": {
            str(k): [[z.real, z.imag] for z in zs]
            for k, zs in report.graph_cover_certified.items()},
    }
    (outdir / "report.json").write_text(json.dumps(payload, sort_keys=True))
    return 0 if f is not None else 3


# -- parser --------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="plurikit", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
        p.add_argument("--jobs", type=int, default=1, help="worker threads (default 1)")
        p.add_argument("--out", default="-", help="output path (default stdout)")

    p = sub.add_parser("extremal-ball", help="closed-form ball extremal values")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--r", required=True, help="comma-separated radii")
    common(p)
    p.set_defaults(func=_cmd_extremal_ball)

    p = sub.add_parser("lambda-table", help="chord tangency points over a grid")
    p.add_argument("--rho", required=True, help="comma-separated radii")
    p.add_argument("--s-frac", default="0.25,0.5,0.75",
                   help="fractions of the regime threshold")
    common(p)
    p.set_defaults(func=_cmd_lambda_table)

    p = sub.add_parser("envelope-check", help="convex envelope oracle vs closed form")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--refine", type=int, default=16)
    p.add_argument("--T", type=float, default=None)
    common(p)
    p.set_defaults(func=_cmd_envelope_check)

    p = sub.add_parser("hull", help="planar polynomial hull of a region file")
    p.add_argument("--in", dest="infile", required=True)
    common(p)
    p.set_defaults(func=_cmd_hull)

    p = sub.add_parser("dilate", help="closed dilation of a region file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--radius", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_dilate)

    p = sub.add_parser("prop1016", help="ascending carve-and-hull construction")
    p.add_argument("--in", dest="infiles", action="append", required=True)
    p.add_argument("--kmax", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_prop1016)

    def search_common(p):
        common(p)
        p.add_argument("--degree-cap", type=int, default=64)
        p.add_argument("--steps", type=int, default=2000)

    p = sub.add_parser("certify-j", help="point-separation certificate search")
    p.add_argument("--set", required=True, help="sample-set JSON file")
    p.add_argument("--point", required=True, help="point as JSON [[re,im],...]")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    search_common(p)
    p.set_defaults(func=_cmd_certify_j)

    p = sub.add_parser("q-bound", help="constrained point gauge lower bound")
    p.add_argument("--set", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--t", type=float, required=True)
    search_common(p)
    p.set_defaults(func=_cmd_q_bound)

    p = sub.add_parser("refute-level", help="refute hull-level membership")
    p.add_argument("--set", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--level", type=int, required=True)
    search_common(p)
    p.set_defaults(func=_cmd_refute_level)

    p = sub.add_parser("build-series", help="series with prescribed bounded directions")
    p.add_argument("--sets", nargs="*", default=[], help="sample-set JSON files")
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--eta", type=float, default=0.35)
    p.add_argument("--cover-count", type=int, default=120)
    p.add_argument("--report", default=None)
    search_common(p)
    p.set_defaults(func=_cmd_build_series)

    p = sub.add_parser("test-convergence", help="classify directions against a series")
    p.add_argument("--series", required=True)
    p.add_argument("--point", action="append", required=True)
    p.add_argument("--threshold", type=float, default=2.0)
    common(p)
    p.set_defaults(func=_cmd_test_convergence)

    p = sub.add_parser("gamma-pipeline", help="graph pipeline over planar regions")
    p.add_argument("--regions", nargs="+", required=True)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--degree-cap", type=int, default=4096)
    p.add_argument("--steps", type=int, default=200)
    common(p)
    p.set_defaults(func=_cmd_gamma_pipeline)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    if "PLURIKIT_SEED" in os.environ:
        args.seed = int(os.environ["PLURIKIT_SEED"])
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
