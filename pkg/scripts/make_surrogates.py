"""Generate stand-in benchmark sets with MILP-certified optima.

The OR-Library files are not redistributed here.  This writes instances with
the same generator statistics (set 4: 200 x 1000, 2 %, costs 1..100; set E:
50 x 500, 20 %, unicost) and, next to the output directory, a
``<outdir>_reference.txt`` of proven optima in ``name value`` form.

    python scripts/make_surrogates.py tests/data/surrogate
"""

import argparse
from pathlib import Path

import numpy as np

from mfscp.bench import milp_reference
from mfscp.formats import write_instance
from mfscp.generators import beasley_instance


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir")
    ap.add_argument("--seed", type=int, default=1998)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    ss = np.random.SeedSequence(args.seed)
    seeds = ss.spawn(15)

    jobs = [(f"s4.{j + 1}", beasley_instance(np.random.default_rng(seeds[j]), 200, 1000, 0.02))
            for j in range(10)]
    jobs += [(f"sE.{j + 1}", beasley_instance(np.random.default_rng(seeds[10 + j]), 50, 500, 0.2,
                                              unicost=True)) for j in range(5)]
    lines = []
    for name, inst in jobs:
        opt = milp_reference(inst)
        if opt is None:
            raise SystemExit(f"{name}: MILP did not prove optimality")
        write_instance(inst, out / f"{name}.txt", "row")
        lines.append(f"{name} {opt:g}")
        print(name, inst, opt, flush=True)
    (out.parent / f"{out.name}_reference.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
