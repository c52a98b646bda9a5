"""Command-line front end: ``mfscp solve|bench|convert|inspect|serve``.

Exit codes for ``solve``: 0 feasible, 2 infeasible, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import bench
from .baselines import greedy_repair
from .engine import solve_trials, write_trace
from .errors import ScpError
from .formats import FormatKind, emit, parse, parse_auto
from .schema import solution_payload


def read_input(path, fmt):
    data = sys.stdin.buffer.read() if str(path) == "-" else Path(path).read_bytes()
    name = None if str(path) == "-" else Path(path).stem
    if fmt == "auto":
        return parse_auto(data, name=name)
    return parse(data, fmt, name=name), FormatKind(fmt)


def run_solve(instance, trials=1, seed=0, overrides=None, repair=False, strict=False):
    """Best of ``trials`` seeded solves; wall time covers all trials."""
    t_start = time.perf_counter()
    overrides = dict(overrides or {})
    if strict:
        overrides["strict"] = True
    best, _ = solve_trials(instance, trials, seed, overrides)
    if repair:
        fixed = greedy_repair(instance, best)
        best = replace(fixed, sweeps=best.sweeps, t_steps=best.t_steps,
                       final_saturation=best.final_saturation, exhausted=best.exhausted,
                       meta={**best.meta, "repaired": True})
    return replace(best, wall_seconds=time.perf_counter() - t_start)


def _overrides(args):
    return {
        "k_anneal": args.k,
        "alpha": args.alpha,
        "t0": args.t0,
        "unicost": True if args.unicost else None,
        "penalty_mode": args.penalty,
        "trunc_eps": args.truncate,
    }


def cmd_solve(args):
    try:
        instance, _ = read_input(args.input, args.format)
        sol = run_solve(instance, args.trials, args.seed, _overrides(args), args.repair)
    except (ScpError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.trace and "trace" in sol.meta:
        with open(args.trace, "w") as fh:
            write_trace(sol.meta["trace"], fh)
    if args.solution_out:
        Path(args.solution_out).write_text("".join(f"{c}\n" for c in sol.columns))
    if args.json:
        payload = solution_payload(instance, sol, trials=args.trials, seed=args.seed,
                                   include_columns=True, timing=not args.no_timing)
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"cost      {sol.cost:g}")
        print(f"feasible  {'yes' if sol.feasible else 'no'}")
        print(f"M         {instance.n_rows}")
        print(f"N         {instance.n_cols}")
        print(f"density   {instance.density:.6g}")
        if not args.no_timing:
            print(f"seconds   {sol.wall_seconds:.3f}")
    return 0 if sol.feasible else 2


def cmd_bench(args):
    try:
        items = bench.discover(args.path)
        if not items:
            raise FileNotFoundError(f"no instances under {args.path}")
        reference = (bench.reference_table() if args.reference == "builtin"
                     else bench.load_reference(args.reference))
        report = bench.run_bench(items, args.trials, args.seed, reference=reference,
                                 workers=args.workers, fmt=args.format)
    except (ScpError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(bench.format_table(report, timing=not args.no_timing))
    if args.csv:
        Path(args.csv).write_text(bench.format_csv(report, timing=not args.no_timing))
    return 0


def cmd_convert(args):
    try:
        instance, _ = read_input(args.input, getattr(args, "from"))
    except (ScpError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    data = emit(instance, args.to)
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        Path(args.output).write_bytes(data)
    return 0


def cmd_inspect(args):
    try:
        instance, kind = read_input(args.input, args.format)
    except (ScpError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    rs, cs = instance.row_sums, instance.col_sums
    info = {
        "format": kind.value, "M": instance.n_rows, "N": instance.n_cols, "nnz": instance.nnz,
        "density": instance.density, "unicost": instance.is_unicost,
        "row_sums_max_min_avg": [int(rs.max()), int(rs.min()), float(rs.mean())],
        "col_sums_max_min_avg": [int(cs.max()), int(cs.min()), float(cs.mean())],
        "cost_min_max": [float(instance.costs.min()), float(instance.costs.max())],
    }
    for key, val in info.items():
        print(f"{key:<22}{val}")
    return 0


def cmd_serve(args):
    from .service import SolveService, serve

    service = SolveService(size_cap=args.cap, max_concurrent=args.max_concurrent)
    serve(service, args.host, args.port)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="mfscp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("input", help="instance file, or - for stdin")
    s.add_argument("--format", choices=["row", "col", "auto"], default="auto")
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--k", type=float, help="annealing factor")
    s.add_argument("--alpha", type=float, help="penalty weight")
    s.add_argument("--t0", type=float, help="start temperature")
    s.add_argument("--unicost", action="store_true", help="force the unicost parameter set")
    s.add_argument("--penalty", choices=["multilinear", "piecewise"])
    s.add_argument("--truncate", type=float, metavar="EPS", help="truncation threshold (0 = off)")
    s.add_argument("--repair", action="store_true", help="greedy repair + redundancy removal")
    s.add_argument("--trace", metavar="PATH", help="write the main run's T/saturation trace (CSV)")
    s.add_argument("--solution-out", metavar="PATH", help="write selected columns, 1-based")
    s.add_argument("--json", action="store_true")
    s.add_argument("--no-timing", action="store_true")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="multi-trial benchmark over a directory or manifest")
    b.add_argument("path")
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--reference", default="builtin", help="'builtin' or a file of 'name value' lines")
    b.add_argument("--format", choices=["row", "col", "auto"], default="auto")
    b.add_argument("--csv", metavar="PATH")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--no-timing", action="store_true")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("convert", help="convert between row and column ordering")
    c.add_argument("input")
    c.add_argument("output", nargs="?")
    c.add_argument("--from", choices=["row", "col", "auto"], default="auto")
    c.add_argument("--to", choices=["row", "col"], required=True)
    c.set_defaults(func=cmd_convert)

    i = sub.add_parser("inspect", help="print instance statistics")
    i.add_argument("input")
    i.add_argument("--format", choices=["row", "col", "auto"], default="auto")
    i.set_defaults(func=cmd_inspect)

    v = sub.add_parser("serve", help="run the HTTP solve service")
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("--port", type=int, default=8080)
    v.add_argument("--cap", type=int, default=3_000_000, help="maximum nnz (M*N*density)")
    v.add_argument("--max-concurrent", type=int, default=None)
    v.set_defaults(func=cmd_serve)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
