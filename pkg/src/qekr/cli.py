"""Command-line front end.

Every command prints a header (tool, version, command, resolved config)
followed by a payload.  JSON is the canonical format; CSV is a flat
projection for commands that produce tables.  Numeric claims are tagged
with their arithmetic mode: ``exact`` for rationals and integers,
``real@<bits>`` for floating values.

Exit codes: 0 ok, 2 bad usage or parameters, 3 a size cap was hit,
4 a verified invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import __version__
from ._accel import backend_name, set_threads
from .certificate import (
    PSD_RTOL,
    block_dim,
    block_spectrum,
    build_full_certificate,
    build_triangular,
    f_by_formula,
    f_by_similarity,
    hoffman_pipeline,
    is_psd,
    kernel_analysis,
    psd_condition,
    psd_threshold,
    spectrum_error,
    weak_duality_check,
)
from .families import (
    InvariantViolation,
    all_point_stars,
    g_limit,
    g_lower_bound,
    section52_subset_check,
    section52_subspace_pair,
    star_family,
    top_family,
)
from .gfspace import EnumerationCapExceeded, count_all, enumerate_all, enumerate_grassmannian
from .measure import (
    TAIL_PRECISION,
    claim4_tail,
    claim6_tail,
    claim8_tail,
    make_context,
    measure_family,
    measure_star_closed,
    moments,
    star_root_deviation,
    top_family_measure,
    top_family_root,
    measure_star_product_form,
)
from .qcombinat import (
    DEFAULT_PRECISION,
    gaussian_binomial,
    is_real,
    parse_scalar,
    precision_of,
    real_context,
    sigma_conjecture,
    to_fraction,
    to_real,
)
from .search import SearchCapExceeded, SearchConfig, max_measure_t_intersecting

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4
CSV_VERSION = 1
MEASURE_ENUM_LIMIT = 5000
FULL_TOL = 1e-9


# ------------------------------------------------------------------ encoding


def num(x) -> dict:
    """Tag a numeric value with its mode; rationals become ``"a/b"`` strings."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numeric claims")
    if isinstance(x, int):
        return {"value": str(x), "mode": "exact"}
    if isinstance(x, Fraction):
        return {"value": str(x), "mode": "exact"}
    if is_real(x):
        p = precision_of(x)
        ctx = real_context(p)
        return {"value": ctx.nstr(x, ctx.dps), "mode": f"real@{p}", "precision": p}
    if isinstance(x, float):
        return {"value": repr(x), "mode": "real@53", "precision": 53}
    raise TypeError(f"cannot encode {type(x).__name__}")


def cell(x) -> str:
    return num(x)["value"]


@dataclass
class Report:
    payload: dict
    columns: list[str] | None = None
    rows: list[list] | None = None
    ok: bool = True
    lines: list[str] | None = None  # streaming output (enumerate)


@dataclass
class RunConfig:
    precision: int
    threads: int
    enum_cap: int
    max_vertices: int
    format: str
    output: str | None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "precision": self.precision,
            "threads": self.threads,
            "enum_cap": self.enum_cap,
            "max_vertices": self.max_vertices,
            "format": self.format,
            "output": self.output,
            "backend": backend_name(),
        }
        d.update(self.extra)
        return d


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"environment variable {name} must be an integer, got {raw!r}")


# ------------------------------------------------------------------ commands


def _sigma(args, cfg: RunConfig):
    s = parse_scalar(args.sigma)
    if getattr(args, "real", False):
        s = to_real(s, cfg.precision)
    return s


def cmd_measure(args, cfg: RunConfig) -> Report:
    ctx = make_context(args.q, args.n, _sigma(args, cfg))
    n, q = ctx.n, ctx.q
    payload = {
        "q": q, "n": n, "sigma": num(ctx.sigma), "mode": ctx.mode,
        "layers": [{"k": k, "count": num(gaussian_binomial(n, k, q)), "phi": num(ctx.phi[k]),
                    "Phi": num(ctx.layer_mass[k])} for k in range(n + 1)],
        "total": num(sum(ctx.layer_mass, 0 * ctx.layer_mass[0])),
    }
    stars = [{"t": t, "measure": num(measure_star_closed(ctx, t))} for t in range(1, n + 1)]
    payload["stars"] = stars
    payload["top_family"] = {"t": 1, "min_dim": -(-(n + 1) // 2), "measure": num(top_family_measure(ctx, 1))}
    payload["bound"] = num(ctx.sigma / (1 + ctx.sigma))

    ok = True
    checks = {}
    if n >= 1 and count_all(n, q) <= min(cfg.enum_cap, MEASURE_ENUM_LIMIT):
        for t in range(1, n + 1):
            enum = measure_family(ctx, star_family(n, q, t, cap=cfg.enum_cap))
            closed = measure_star_closed(ctx, t)
            good = enum == closed if ctx.exact else abs(enum - closed) <= 2.0 ** (-(cfg.precision // 2))
            checks[f"star_{t}"] = {"enumerated": num(enum), "agrees": good}
            ok &= good
        enum = measure_family(ctx, top_family(n, q, 1, cap=cfg.enum_cap))
        good = enum == top_family_measure(ctx, 1) if ctx.exact else (
            abs(enum - top_family_measure(ctx, 1)) <= 2.0 ** (-(cfg.precision // 2)))
        checks["top_family"] = {"enumerated": num(enum), "agrees": good}
        ok &= good
    else:
        checks["skipped"] = "ambient space too large to enumerate" if n else "nothing to enumerate"
    payload["cross_checks"] = checks
    rows = [[k, cell(gaussian_binomial(n, k, q)), cell(ctx.phi[k]), cell(ctx.layer_mass[k]), ctx.mode]
            for k in range(n + 1)]
    return Report(payload, ["k", "count", "phi", "Phi", "mode"], rows, ok)


def cmd_enumerate(args, cfg: RunConfig) -> Report:
    if args.k is None:
        stream = enumerate_all(args.n, args.q, cfg.enum_cap)
    else:
        stream = iter(enumerate_grassmannian(args.n, args.k, args.q, cfg.enum_cap))
    lines, rows = [], []
    for x in stream:
        if args.encoding == "hex":
            lines.append(x.to_hex())
        else:
            lines.append(json.dumps(x.to_json(), separators=(",", ":")))
        rows.append([x.dim, x.to_hex()])
    payload = {"n": args.n, "q": args.q, "k": args.k, "count": num(len(lines)), "encoding": args.encoding}
    return Report(payload, ["dim", "hex"], rows, True, lines)


def _family_json(fam) -> list:
    return [x.to_hex() for x in fam.members]


def cmd_search(args, cfg: RunConfig) -> Report:
    sigma = _sigma(args, cfg)
    ctx = make_context(args.q, args.n, to_fraction(sigma))
    sc = SearchConfig(max_vertices=cfg.max_vertices, max_optima_reported=args.max_optima,
                      threads=cfg.threads, time_budget=args.time_budget)
    res = max_measure_t_intersecting(ctx, args.t, sc)
    payload = {
        "n": args.n, "q": args.q, "t": args.t,
        "sigma": num(sigma), "sigma_used": num(ctx.sigma),
        "optimum": num(res.optimum),
        "complete": res.complete,
        "optima_count": num(res.optima_count),
        "optima_reported": len(res.families),
        "explored": num(res.explored),
        "vertices": num(res.vertices),
        "star_measure": num(measure_star_closed(ctx, args.t)) if args.t <= args.n else None,
        "encoding": "hex",
        "families": [_family_json(f) for f in res.families],
    }
    if args.t == 1:
        payload["sigma_over_1_plus_sigma"] = num(ctx.sigma / (1 + ctx.sigma))
    return Report(payload)


def cmd_certify(args, cfg: RunConfig) -> Report:
    sigma = parse_scalar(args.sigma)
    n, q = args.n, args.q
    if n < 1:
        raise ValueError("n must be positive")
    pack = build_triangular(n, sigma, q)
    F = f_by_formula(n, sigma, q)
    exact = {
        "similarity_equals_formula": f_by_similarity(pack) == F,
        "anti_triangular": F.is_anti_triangular(),
        "weighted_symmetry": F.weighted_symmetry(),
        "row_sums_one": all(r == 1 for r in F.row_sums()),
        "eigenvalues_match": F.eigenvalues_match(),
    }
    bs = block_spectrum(n, sigma, q)
    exact["shift_identity"] = bs.shift_identity
    threshold = psd_threshold(n, q)
    cond = psd_condition(n, sigma, q)
    exact["condition_matches_spectrum"] = cond == (bs.minimum() >= 0)
    if n >= 3:
        exact["condition_matches_threshold"] = cond == (sigma <= threshold)
    ok = all(exact.values())
    payload = {
        "n": n, "q": q, "sigma": num(sigma),
        "threshold": num(threshold),
        "condition": cond,
        "blocks": [{"i": i, "d": num(block_dim(n, i, q)),
                    "eigenvalues": [{"k": k, "value": num(ev)} for k, ev in bs.blocks[i]]}
                   for i in sorted(bs.blocks)],
        "zero_eigenvalues": [{"i": i, "k": k} for i, k in bs.zeros()],
        "min_eigenvalue": num(bs.minimum()),
        "note": "block (0,0) is the direction Delta^(1/2) 1, which the rank-one term of S' sends to 0",
        "checks": exact,
    }
    if args.full:
        if count_all(n, q) > cfg.enum_cap:
            raise EnumerationCapExceeded(f"|Omega_{n}| = {count_all(n, q)} exceeds cap {cfg.enum_cap}")
        cert = build_full_certificate(n, q, sigma, max_size=args.max_size)
        d = cert.diagnostics
        err = spectrum_error(cert)
        full = {
            "min_eigenvalue": num(float(cert.eigenvalues.min())),
            "max_eigenvalue": num(float(cert.eigenvalues.max())),
            "radius": num(cert.radius),
            "psd": is_psd(cert),
            "psd_tolerance": num(PSD_RTOL * (1 + cert.radius)),
            "spectrum_error": num(err),
            "kernel_dimension": num(cert.kernel.shape[1]),
            "theta_error": num(d["theta_error"]),
            "orthonormality_error": num(d["orthonormality_error"]),
            "A_offsupport_max": num(d["A_offsupport_max"]),
            "A_zero_entry": num(float(cert.A[0, 0])),
        }
        stars = all_point_stars(n, q, cfg.enum_cap)
        gaps = [weak_duality_check(cert, s) for s in stars]
        full["star_gap_max"] = num(max(abs(g.gap) for g in gaps))
        full["star_trace_SX_max"] = num(max(abs(g.trace_SX) for g in gaps))
        fchecks = {
            "spectrum_matches_blocks": err <= FULL_TOL,
            "A_supported_on_disjoint_pairs": d["A_offsupport_max"] == 0.0,
            "theta_closed_form": d["theta_error"] <= FULL_TOL and d["theta_symmetry_error"] <= FULL_TOL,
            "star_gaps_vanish": max(abs(g.gap) for g in gaps) <= FULL_TOL,
        }
        if cond:
            fchecks["psd"] = is_psd(cert)
        if sigma < threshold:
            kr = kernel_analysis(cert, stars)
            full["kernel_expected"] = num(kr.expected)
            full["kernel_span_residual"] = num(kr.span_residual)
            fchecks["kernel_spanned_by_explicit_vectors"] = kr.ok
        hr = hoffman_pipeline(n, q, sigma, cert)
        full["hoffman"] = {
            "lambda1": num(hr.lambda1), "lambda_min": num(hr.lambda_min), "bound": num(hr.bound),
            "exact_bound": num(hr.exact_bound),
        }
        fchecks["hoffman_matches"] = hr.reflects_adjacency and abs(hr.bound - float(hr.exact_bound)) <= FULL_TOL
        full["checks"] = fchecks
        payload["full"] = full
        ok &= all(fchecks.values())
    return Report(payload, ok=ok)


def _grid(args) -> list[int]:
    if args.n_step <= 0 or args.n_min < 1 or args.n_max < args.n_min:
        raise ValueError("need 1 <= n-min <= n-max and n-step > 0")
    return list(range(args.n_min, args.n_max + 1, args.n_step))


def _strictly_decreasing(vals) -> bool:
    return all(b < a for a, b in zip(vals, vals[1:]))


def cmd_tails(args, cfg: RunConfig) -> Report:
    fn: Callable
    if args.claim == "cl4":
        fn = lambda n: claim4_tail(args.theta, n, args.q, args.t, cfg.precision)
    elif args.claim == "cl6":
        fn = lambda n: claim6_tail(args.theta, n, args.q, args.t, args.delta, cfg.precision)
    else:
        fn = lambda n: claim8_tail(args.theta, n, args.q, args.t, cfg.precision)
    reps = [fn(n) for n in _grid(args)]
    vals = [r.normalized for r in reps]
    payload = {
        "claim": args.claim, "theta": num(parse_scalar(args.theta)), "q": args.q, "t": args.t,
        "range": reps[0].cutoff,
        "rows": [{"n": r.n, "raw_tail": num(r.tail), "normalizer": num(r.normalizer),
                  "normalized": num(r.normalized)} for r in reps],
        "strictly_decreasing": _strictly_decreasing(vals),
        "final_over_initial": num(vals[-1] / vals[0]),
    }
    if args.claim == "cl6":
        from .measure import default_delta
        payload["delta"] = num(default_delta(args.theta) if args.delta is None else parse_scalar(args.delta))
    rows = [[r.n, cell(r.tail), cell(r.normalizer), cell(r.normalized)] for r in reps]
    return Report(payload, ["n", "raw_tail", "normalizer", "normalized"], rows)


def cmd_limits(args, cfg: RunConfig) -> Report:
    p = cfg.precision
    th = parse_scalar(args.theta)
    ctx = real_context(p)
    lim = ctx.power(args.q, -(1 - to_real(th, p)) * args.t)
    out, rows = [], []
    for n in _grid(args):
        star = ctx.root(to_real(measure_star_product_form(th, n, args.q, args.t, p), p), n)
        entry = {"n": n, "star_root": num(star), "star_limit": num(lim),
                 "star_deviation": num(star_root_deviation(th, n, args.q, args.t, p)),
                 "top_root": num(top_family_root(th, n, args.q, args.t, p))}
        row = [n, cell(star), cell(lim), entry["star_deviation"]["value"], entry["top_root"]["value"]]
        if args.theta2 is not None:
            g = g_lower_bound(th, args.theta2, n, args.q, args.t, p)
            gl = g_limit(th, args.theta2, args.q, args.t, p)
            entry.update({"g": num(g), "g_limit": num(gl), "g_deviation": num(abs(g - gl))})
            row += [cell(g), cell(gl), cell(abs(g - gl))]
        out.append(entry)
        rows.append(row)
    cols = ["n", "star_root", "star_limit", "star_deviation", "top_root"]
    if args.theta2 is not None:
        cols += ["g", "g_limit", "g_deviation"]
    tops = [to_real(parse_scalar(e["top_root"]["value"]), p) for e in out]
    payload = {
        "theta": num(th), "theta2": num(parse_scalar(args.theta2)) if args.theta2 is not None else None,
        "q": args.q, "t": args.t, "rows": out,
        "top_root_increasing": all(b > a for a, b in zip(tops, tops[1:])),
    }
    return Report(payload, cols, rows)


def cmd_moments(args, cfg: RunConfig) -> Report:
    rep = moments(args.theta, args.n, args.q, cfg.precision)
    names = ["mean_X", "mean_X2", "var_X", "mean_Xinv", "mean_Xinv2", "var_Xinv"]
    disc = rep.discrepancies()
    tol = 2.0 ** (-(cfg.precision // 2))
    ok = all(v == 0 if not is_real(v) else v <= tol for v in disc.values())
    payload = {
        "theta": num(rep.theta), "n": rep.n, "q": rep.q,
        "closed": {k: num(getattr(rep, k)) for k in names},
        "direct": {k: num(v) for k, v in rep.direct.items()},
        "limits": {k: num(v) for k, v in rep.limits.items()},
        "discrepancies": {k: num(v) for k, v in disc.items()},
        "deviations": {k: num(v) for k, v in rep.deviations().items()},
    }
    rows = [[k, cell(getattr(rep, k)), cell(rep.direct[k]), cell(rep.limits[k])] for k in names]
    return Report(payload, ["moment", "closed", "direct", "limit"], rows, ok)


def cmd_conjecture(args, cfg: RunConfig) -> Report:
    out, rows = [], []
    for n in range(args.n_min, args.n_max + 1):
        sigma = sigma_conjecture(args.p, n, args.q, cfg.precision)
        exact_sigma = to_fraction(sigma)
        ctx = make_context(args.q, n, exact_sigma)
        bound = exact_sigma / (1 + exact_sigma)
        entry = {"n": n, "sigma": num(sigma), "sigma_used": num(exact_sigma), "bound": num(bound),
                 "star_measure": num(measure_star_closed(ctx, 1))}
        try:
            res = max_measure_t_intersecting(
                ctx, 1, SearchConfig(max_vertices=cfg.max_vertices, threads=cfg.threads,
                                     time_budget=args.time_budget))
        except SearchCapExceeded as exc:
            entry["status"] = f"skipped: {exc}"
            out.append(entry)
            rows.append([n, cell(sigma), cell(to_real(bound, cfg.precision)), "", "", "skipped",
                         f"real@{cfg.precision}"])
            continue
        ratio = res.optimum / bound
        entry.update({"status": "complete" if res.complete else "partial", "optimum": num(res.optimum),
                      "optimum_over_bound": num(ratio), "optima_count": num(res.optima_count)})
        out.append(entry)
        # the csv projection shows decimals; the json payload keeps the exact dyadic values
        rows.append([n, cell(to_real(sigma, cfg.precision)), cell(to_real(bound, cfg.precision)),
                     cell(to_real(res.optimum, cfg.precision)), cell(to_real(ratio, cfg.precision)),
                     entry["status"], f"real@{cfg.precision}"])
    payload = {"p": num(parse_scalar(args.p)), "q": args.q, "rows": out}
    cols = ["n", "sigma", "bound", "optimum", "optimum_over_bound", "status", "mode"]
    return Report(payload, cols, rows)


def cmd_counterexample(args, cfg: RunConfig) -> Report:
    both = not (args.subspace or args.subsets)
    payload = {}
    if args.subspace or both:
        pr = section52_subspace_pair(args.l, args.q)
        payload["subspace"] = {
            "l": args.l, "q": args.q, "size_U": num(len(pr.U)), "size_W": num(len(pr.W)),
            "product": num(pr.product), "ekr_product": num(pr.ekr_product),
            "cross_intersecting": pr.cross_intersecting,
            "comparison": f"{pr.product} {'>' if pr.exceeds else '<='} {pr.ekr_product}",
        }
        if not pr.cross_intersecting:
            raise InvariantViolation("the subspace pair is not cross-intersecting")
    if args.subsets or both:
        k = args.k if args.k is not None else 2
        l = args.l_sub if args.l_sub is not None else 18
        n = args.n if args.n is not None else 34
        sc = section52_subset_check(k, l, n)
        payload["subsets"] = {
            "k": k, "l": l, "n": n, "lhs": num(sc.lhs), "rhs": num(sc.rhs), "condition": sc.condition,
            "condition_text": f"{sc.lhs} {'>' if sc.condition else '<='} {sc.rhs}",
            "size_U": num(sc.size_U), "size_W": num(sc.size_W),
            "product": num(sc.product), "ekr_product": num(sc.ekr_product),
            "comparison": f"{sc.product} {'>' if sc.exceeds else '<='} {sc.ekr_product}",
        }
        if sc.condition != sc.exceeds:
            raise InvariantViolation("the arithmetic condition disagrees with the product comparison")
    return Report(payload)


# ------------------------------------------------------------------ parser


def _global_options(default) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--precision", type=int, default=default,
                   help="real-mode precision in bits (env QEKR_PRECISION; default 256, tails/limits 512)")
    g.add_argument("--threads", type=int, default=default, help="worker threads (env QEKR_THREADS; default 1)")
    g.add_argument("--enum-cap", type=int, default=default,
                   help="largest enumeration allowed (env QEKR_ENUM_CAP; default 1000000)")
    g.add_argument("--max-vertices", type=int, default=default,
                   help="largest search graph allowed (env QEKR_MAX_VERTICES; default 400)")
    g.add_argument("--format", choices=("json", "csv"), default=default,
                   help="output format (default json; csv for tails and limits)")
    g.add_argument("--output", default=default, help="write output to this file instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    # subcommands accept the global flags too; SUPPRESS keeps them from clobbering earlier values
    common = _global_options(argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="qekr", description=__doc__.splitlines()[0], parents=[_global_options(None)])
    p.add_argument("--version", action="version", version=f"qekr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common], description=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("measure", cmd_measure, "layer weights and the measure of stars and the top family")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sigma", required=True, help='rational "a/b" or decimal; use --sigma=-x for negatives')
    sp.add_argument("--real", action="store_true", help="evaluate in real mode at --precision")

    sp = add("enumerate", cmd_enumerate, "stream subspaces of F_q^n in canonical order")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=None, help="only this dimension")
    sp.add_argument("--encoding", choices=("json", "hex"), default="json")

    sp = add("search", cmd_search, "exact maximum-measure t-intersecting family")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--time-budget", type=float, default=None, help="seconds; result marked incomplete if hit")
    sp.add_argument("--max-optima", type=int, default=64, help="optimal families to report")
    sp.add_argument("--real", action="store_true", help=argparse.SUPPRESS)

    sp = add("certify", cmd_certify, "block spectrum of the dual certificate and its PSD verdict")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--full", action="store_true", help="also assemble S' on all subspaces (small n)")
    sp.add_argument("--max-size", type=int, default=1500, help="largest ambient lattice for --full")

    sp = add("tails", cmd_tails, "normalized tail masses on a grid of n")
    sp.add_argument("--claim", choices=("cl4", "cl6", "cl8"), required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--delta", default=None, help="exponent for cl6 (default (theta-1/2)^2/4)")
    sp.add_argument("--n-min", type=int, default=10)
    sp.add_argument("--n-max", type=int, default=40)
    sp.add_argument("--n-step", type=int, default=2)

    sp = add("limits", cmd_limits, "n-th roots of star and top-family measures on a grid of n")
    sp.add_argument("--theta", required=True)
    sp.add_argument("--theta2", default=None, help="second parameter for the cross lower bound")
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n-min", type=int, default=10)
    sp.add_argument("--n-max", type=int, default=40)
    sp.add_argument("--n-step", type=int, default=2)

    sp = add("moments", cmd_moments, "moments of q^(k - theta n), closed form against direct sum")
    sp.add_argument("--theta", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=2)

    sp = add("conjecture", cmd_conjecture, "search optimum against sigma/(1+sigma) for sigma=[pn]/([n]-[pn])")
    sp.add_argument("--p", required=True)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n-min", type=int, default=2)
    sp.add_argument("--n-max", type=int, default=4)
    sp.add_argument("--time-budget", type=float, default=None)

    sp = add("counterexample", cmd_counterexample, "pairs beating the cross-intersecting product bound")
    sp.add_argument("--subspace", action="store_true", help="lines in a plane vs l-spaces through it")
    sp.add_argument("--subsets", action="store_true", help="the subset-lattice arithmetic check")
    sp.add_argument("--l", type=int, default=3, help="l for the subspace pair")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--k", type=int, default=None, help="k for the subset check (default 2)")
    sp.add_argument("--l-sub", type=int, default=None, help="l for the subset check (default 18)")
    sp.add_argument("--n", type=int, default=None, help="n for the subset check (default 34)")
    return p


def resolve_config(args) -> RunConfig:
    wide = args.command in ("tails", "limits")
    precision = args.precision if args.precision is not None else _env_int(
        "QEKR_PRECISION", TAIL_PRECISION if wide else DEFAULT_PRECISION)
    threads = args.threads if args.threads is not None else _env_int("QEKR_THREADS", 1)
    enum_cap = args.enum_cap if args.enum_cap is not None else _env_int("QEKR_ENUM_CAP", 10**6)
    max_vertices = args.max_vertices if args.max_vertices is not None else _env_int("QEKR_MAX_VERTICES", 400)
    fmt = args.format or ("csv" if wide else "json")
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    if threads < 1 or enum_cap < 1 or max_vertices < 1:
        raise ValueError("threads, enum-cap and max-vertices must be positive")
    return RunConfig(precision, threads, enum_cap, max_vertices, fmt, args.output)


def header(command: str, cfg: RunConfig) -> dict:
    return {"tool": "qekr", "version": __version__, "command": command, "config": cfg.as_dict()}


def render(command: str, cfg: RunConfig, rep: Report) -> str:
    head = header(command, cfg)
    if rep.lines is not None and cfg.format == "json":
        return "\n".join(["# " + json.dumps(head, separators=(",", ":"))] + rep.lines) + "\n"
    if cfg.format == "csv":
        if rep.rows is None:
            raise ValueError(f"{command} has no csv projection; use --format json")
        buf = io.StringIO()
        buf.write(f"# csv-v{CSV_VERSION} " + json.dumps(head, separators=(",", ":")) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rep.columns)
        w.writerows(rep.rows)
        return buf.getvalue()
    doc = {"header": head, "payload": rep.payload, "ok": rep.ok}
    return json.dumps(doc, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
        set_threads(cfg.threads)
        rep = args.fn(args, cfg)
        text = render(args.command, cfg, rep)
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (EnumerationCapExceeded, SearchCapExceeded) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.ok else EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
