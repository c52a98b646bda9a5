"""Saturation against temperature for one solve, as CSV.

Run on an instance file (or the generated CYC6 with ``--cyc6``) and plot
column ``sigma`` against ``T`` on a log axis with any tool.

    python scripts/saturation_trace.py data/orlib/scp41.txt -o trace41.csv
"""

import argparse
import sys

from mfscp.engine import solve, write_trace
from mfscp.formats import read_instance
from mfscp.generators import hypercube_cycle_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input", nargs="?")
    ap.add_argument("--cyc6", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--prerun", action="store_true", help="emit the prerun trace instead")
    ap.add_argument("-o", "--output")
    args = ap.parse_args()
    if args.cyc6:
        inst = hypercube_cycle_instance(6)
    elif args.input:
        inst = read_instance(args.input)
    else:
        ap.error("give an instance file or --cyc6")

    sol = solve(inst, seed=args.seed)
    if args.prerun and "prerun_trace" not in sol.meta:
        sys.exit("no prerun for this instance (unicost or alpha and t0 given)")
    trace = sol.meta["prerun_trace" if args.prerun else "trace"]
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        write_trace(trace, out)
    finally:
        if args.output:
            out.close()
    print(f"# cost {sol.cost:g} feasible {sol.feasible} T0 {sol.meta['t0']:.4g} "
          f"alpha {sol.meta['alpha']:.4g}", file=sys.stderr)


if __name__ == "__main__":
    main()
