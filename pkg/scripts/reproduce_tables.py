"""Best and average of 10 trials over a directory of OR-Library files.

Prints the per-problem table and per-set mean deviations next to the
published numbers, e.g.

    python scripts/reproduce_tables.py data/orlib --csv results.csv

Rail problems are skipped unless ``--rail`` is given; they take minutes each.
"""

import argparse
import sys

from mfscp import bench


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("path", help="directory or manifest of instance files")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--reference", default="builtin")
    ap.add_argument("--rail", action="store_true", help="include the rail problems")
    ap.add_argument("--only", nargs="*", metavar="SET", help="restrict to problem sets, e.g. 4 E CYC")
    ap.add_argument("--csv")
    args = ap.parse_args()

    items = bench.discover(args.path)
    if not args.rail:
        items = [it for it in items if bench.problem_set(it[0]) != "Rail"]
    if args.only:
        items = [it for it in items if bench.problem_set(it[0]) in args.only]
    if not items:
        sys.exit(f"no instances under {args.path}")
    reference = (bench.reference_table() if args.reference == "builtin"
                 else bench.load_reference(args.reference))
    report = bench.BenchReport()
    for item in items:
        part = bench.run_bench([item], args.trials, args.seed, reference=reference,
                               workers=args.workers)
        report.entries += part.entries
        e = part.entries[0]
        print(f"{e.name}: best {e.best_cost:g} avg {e.avg_cost:.1f} "
              f"feasible {e.n_feasible}/{e.n_trials}", file=sys.stderr, flush=True)
    sys.stdout.write(bench.format_table(report))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(bench.format_csv(report))


if __name__ == "__main__":
    main()
