"""Seconds per sweep against nnz, and against M*N at fixed nnz.

    python scripts/timing_scaling.py --max-nnz 3000000
"""

import argparse

import numpy as np

from mfscp.bench import sweep_times, timing_scaling
from mfscp.generators import sparse_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-nnz", type=float, default=1e4)
    ap.add_argument("--max-nnz", type=float, default=1e6)
    ap.add_argument("--points", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    grid = np.geomspace(args.min_nnz, args.max_nnz, args.points).astype(int)
    insts = [sparse_instance(rng, n // 20, n // 5, int(n)) for n in grid]
    fit = timing_scaling(insts)
    print("nnz,seconds_per_sweep")
    for nnz, secs in fit.pairs:
        print(f"{nnz},{secs:.6g}")
    print(f"# log-log slope {fit.slope:.3f}")

    nnz = 200_000
    print("\nM,N,nnz,seconds_per_sweep")
    shapes = [(2_000, 10_000), (4_000, 10_000), (8_000, 10_000), (2_000, 20_000), (2_000, 40_000)]
    insts = [sparse_instance(rng, m, n, nnz) for m, n in shapes]
    for (m, n), inst, secs in zip(shapes, insts, sweep_times(insts)):
        print(f"{m},{n},{inst.nnz},{secs:.6g}")


if __name__ == "__main__":
    main()
