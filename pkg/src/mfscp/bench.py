"""Multi-trial benchmark runs, published reference values and report emission."""

from __future__ import annotations

import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .engine import SolverParams, init_state, solve, sweep
from .errors import InsufficientData
from .formats import read_instance

# name: (optimal or best known, best of 10, average of 10, seconds on the original hardware)
PUBLISHED = {
    "4.1": (429, 435, 435.6, 0.44), "4.2": (512, 517, 518.0, 0.49),
    "4.3": (516, 531, 532.7, 0.45), "4.4": (494, 512, 520.9, 0.48),
    "4.5": (512, 522, 524.1, 0.46), "4.6": (560, 566, 567.8, 0.44),
    "4.7": (430, 446, 446.0, 0.45), "4.8": (492, 492, 493.8, 0.46),
    "4.9": (641, 658, 661.4, 0.47), "4.10": (514, 521, 521.0, 0.45),
    "5.1": (253, 260, 268.6, 0.87), "5.2": (302, 316, 316.0, 0.83),
    "5.3": (226, 229, 229.0, 0.86), "5.4": (242, 247, 247.5, 0.86),
    "5.5": (211, 214, 214.3, 0.83), "5.6": (213, 213, 213.2, 0.82),
    "5.7": (293, 304, 305.0, 0.86), "5.8": (288, 299, 300.1, 0.90),
    "5.9": (279, 281, 281.0, 0.82), "5.10": (265, 273, 274.0, 0.83),
    "6.1": (138, 143, 143.0, 0.63), "6.2": (146, 153, 153.2, 0.62),
    "6.3": (145, 150, 150.2, 0.60), "6.4": (131, 132, 133.1, 0.62),
    "6.5": (161, 169, 169.8, 0.62),
    "A.1": (253, 260, 261.5, 1.5), "A.2": (252, 257, 258.3, 1.5),
    "A.3": (232, 238, 241.3, 1.5), "A.4": (234, 238, 239.7, 1.5),
    "A.5": (236, 238, 238.9, 1.4),
    "B.1": (69, 70, 71.2, 2.2), "B.2": (76, 77, 77.6, 2.3), "B.3": (80, 83, 83.7, 2.2),
    "B.4": (79, 80, 80.0, 2.3), "B.5": (72, 72, 72.0, 2.3),
    "C.1": (227, 233, 233.6, 2.2), "C.2": (219, 222, 224.3, 2.2),
    "C.3": (243, 249, 251.1, 2.3), "C.4": (219, 220, 220.1, 2.3),
    "C.5": (215, 219, 219.1, 2.2),
    "D.1": (60, 64, 64.6, 3.7), "D.2": (66, 66, 66.3, 3.8), "D.3": (72, 73, 75.1, 3.9),
    "D.4": (62, 63, 63.0, 3.8), "D.5": (61, 64, 64.6, 3.8),
    "NRE.1": (29, 29, 29.5, 9.8), "NRE.2": (30, 32, 32.1, 9.8),
    "NRE.3": (27, 28, 28.2, 9.7), "NRE.4": (28, 29, 29.7, 9.8),
    "NRE.5": (28, 29, 29.0, 9.8),
    "NRF.1": (14, 14, 14.9, 19), "NRF.2": (15, 15, 15.4, 18), "NRF.3": (14, 15, 15.2, 19),
    "NRF.4": (14, 15, 15.4, 19), "NRF.5": (13, 14, 14.7, 19),
    "NRG.1": (176, 180, 180.1, 10), "NRG.2": (155, 157, 159.0, 10),
    "NRG.3": (166, 173, 174.9, 10), "NRG.4": (168, 175, 176.3, 10),
    "NRG.5": (168, 175, 176.9, 11),
    "NRH.1": (64, 65, 66.4, 21), "NRH.2": (64, 66, 67.0, 21), "NRH.3": (59, 62, 62.8, 20),
    "NRH.4": (58, 60, 61.8, 21), "NRH.5": (55, 56, 56.4, 21),
    # Rail516 printed with a best known value above the MF result; kept as printed
    "Rail507": (174, 187, 188.2, 37), "Rail516": (211, 186, 187.9, 26),
    "Rail582": (182, 222, 225.5, 32), "Rail2536": (691, 737, 740.0, 1100),
    "Rail2586": (951, 1018, 1026.7, 830), "Rail4284": (1065, 1152, 1162.1, 1100),
    "Rail4872": (1534, 1640, 1643.5, 1050),
    "E.1": (5, 5, 5.3, 0.15), "E.2": (5, 5, 5.0, 0.14), "E.3": (5, 5, 5.0, 0.15),
    "E.4": (5, 5, 5.0, 0.14), "E.5": (5, 5, 5.0, 0.16),
    "CYC.6": (60, 62, 63.0, 0.08), "CYC.7": (144, 151, 153.4, 0.20),
    "CYC.8": (344, 348, 352.1, 0.62), "CYC.9": (780, 829, 832.6, 1.6),
    "CYC.10": (1792, 1870, 1882.3, 3.9), "CYC.11": (4103, 4240, 4248.7, 9.6),
    "CLR.10": (25, 27, 29.0, 0.36), "CLR.11": (23, 26, 28.9, 1.0),
    "CLR.12": (26, 30, 30.9, 3.2), "CLR.13": (26, 31, 32.9, 10),
    "STS.45": (30, 31, 31.8, 0.03), "STS.81": (61, 63, 63.9, 0.11),
    "STS.135": (104, 105, 107.4, 0.32), "STS.243": (202, 205, 206.8, 1.1),
}

# mean relative deviation (%) per problem set
PUBLISHED_SET_DEVIATION = {
    "4": 2.1, "5": 2.7, "6": 3.5, "A": 2.2, "B": 1.1, "C": 1.7, "D": 2.9, "E": 0.0,
    "NRE": 3.5, "NRF": 4.4, "NRG": 3.1, "NRH": 2.0, "Rail": 6.8, "CYC": 3.7,
    "CLR": 16.0, "STS": 2.5,
}


def reference_table():
    """Published optimal / best-known values by problem name."""
    return {name: row[0] for name, row in PUBLISHED.items()}


def load_reference(path):
    """Read ``name value`` pairs, one per line; ``#`` starts a comment."""
    table = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            name, value = line.split()[:2]
            table[name] = float(value)
    return table


_ORLIB = re.compile(r"^scp(nr[e-h]|cyc|clr|sts|[a-e]|[4-6])0*(\d+)$", re.I)
_RAIL = re.compile(r"^rail(\d+)$", re.I)


def problem_name(path):
    """Map OR-Library file names to table names: scp41 -> 4.1, scpcyc06 -> CYC.6, rail507 -> Rail507."""
    stem = Path(path).name.split(".")[0]
    if m := _RAIL.match(stem):
        return f"Rail{m.group(1)}"
    if m := _ORLIB.match(stem):
        return f"{m.group(1).upper()}.{int(m.group(2))}"
    return Path(path).stem


def problem_set(name):
    return "Rail" if name.startswith("Rail") else name.split(".")[0]


def _sort_key(name):
    head, _, tail = name.partition(".")
    return (head, int(tail) if tail.isdigit() else 0, name)


@dataclass
class BenchEntry:
    name: str
    n_rows: int
    n_cols: int
    density: float
    nnz: int
    reference: float | None
    costs: list = field(default_factory=list)
    feasible: list = field(default_factory=list)
    seconds: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def n_trials(self):
        return len(self.costs)

    def _pool(self):
        good = [c for c, f in zip(self.costs, self.feasible) if c is not None and f]
        return good or [c for c in self.costs if c is not None]

    @property
    def n_feasible(self):
        return sum(bool(f) for f in self.feasible)

    @property
    def best_cost(self):
        pool = self._pool()
        return min(pool) if pool else None

    @property
    def avg_cost(self):
        pool = self._pool()
        return float(np.mean(pool)) if pool else None

    def _dev(self, value):
        if value is None or not self.reference:
            return None
        return (value - self.reference) / self.reference

    @property
    def rel_deviation(self):
        return self._dev(self.best_cost)

    @property
    def avg_rel_deviation(self):
        return self._dev(self.avg_cost)

    @property
    def mean_seconds(self):
        done = [s for s in self.seconds if s is not None]
        return float(np.mean(done)) if done else None


@dataclass
class BenchReport:
    entries: list = field(default_factory=list)
    timing: list = field(default_factory=list)

    def set_means(self, avg=False):
        """Mean relative deviation in percent per problem set, best-of-trials by default."""
        groups = {}
        for e in self.entries:
            dev = e.avg_rel_deviation if avg else e.rel_deviation
            if dev is not None:
                groups.setdefault(problem_set(e.name), []).append(dev)
        return {s: 100.0 * float(np.mean(d)) for s, d in groups.items()}


def run_trials(instance, n_trials=10, base_seed=0, overrides=None, *, name=None,
               reference=None, workers=1):
    """Run ``solve`` with seeds base_seed .. base_seed + n_trials - 1."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    overrides = dict(overrides or {})

    def one(t):
        try:
            return solve(instance, {**overrides, "seed": base_seed + t}), None
        except Exception as exc:  # a failed trial is recorded, not fatal
            return None, exc

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, range(n_trials)))
    else:
        results = [one(t) for t in range(n_trials)]

    entry = BenchEntry(
        name=name or instance.name or "instance",
        n_rows=instance.n_rows, n_cols=instance.n_cols,
        density=instance.density, nnz=instance.nnz, reference=reference,
    )
    for sol, exc in results:
        entry.costs.append(None if sol is None else sol.cost)
        entry.feasible.append(False if sol is None else sol.feasible)
        entry.seconds.append(None if sol is None else sol.wall_seconds)
        entry.errors.append(None if exc is None else repr(exc))
    return entry


def discover(path):
    """Instance files under a directory, or listed in a manifest.

    A manifest has one ``path [name [reference]]`` entry per line; relative
    paths are resolved against the manifest's directory.  Returns
    ``(name, path, reference_or_None)`` triples.
    """
    path = Path(path)
    items = []
    if path.is_dir():
        for p in path.iterdir():
            if p.is_file() and not p.name.startswith(".") and p.suffix.lower() not in (".md", ".csv"):
                items.append((problem_name(p), p, None))
    else:
        for line in path.read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            p = Path(parts[0])
            if not p.is_absolute():
                p = path.parent / p
            if not p.is_file():
                raise FileNotFoundError(f"manifest entry {parts[0]!r} not found")
            name = parts[1] if len(parts) > 1 else problem_name(p)
            ref = float(parts[2]) if len(parts) > 2 else None
            items.append((name, p, ref))
    return sorted(items, key=lambda it: _sort_key(it[0]))


def run_bench(items, n_trials=10, base_seed=0, overrides=None, reference=None, workers=1,
              fmt="auto"):
    """Benchmark ``(name, path, reference)`` items. Parsing is not timed."""
    reference = reference_table() if reference is None else reference
    report = BenchReport()
    for name, path, ref in items:
        instance = read_instance(path, fmt)
        ref = ref if ref is not None else reference.get(name)
        report.entries.append(run_trials(instance, n_trials, base_seed, overrides, name=name,
                                         reference=ref, workers=workers))
    return report


def seconds_per_sweep(instance, n_sweeps=None, repeats=3, temperature=1.0, alpha=1.0):
    """Best-of-``repeats`` mean wall time of one full sweep."""
    if n_sweeps is None:
        n_sweeps = max(3, int(2e6 // max(instance.nnz, 1)))
    params = SolverParams(alpha=alpha, t0=temperature)
    state = init_state(instance, params)
    sweep(instance, state, alpha, params)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(n_sweeps):
            sweep(instance, state, alpha, params)
        best = min(best, (time.perf_counter() - t0) / n_sweeps)
    return best


@dataclass
class TimingFit:
    slope: float
    intercept: float
    pairs: list


def sweep_times(instances, rounds=3, **kwargs):
    """Seconds per sweep for each instance, minimum over interleaved rounds.

    Each round times every instance warm (best of three back-to-back
    blocks); repeating the rounds keeps a slow spell on a shared machine
    from landing on a single instance.
    """
    best = [float("inf")] * len(instances)
    for _ in range(rounds):
        for j, inst in enumerate(instances):
            best[j] = min(best[j], seconds_per_sweep(inst, **kwargs))
    return best


def timing_scaling(instances, rounds=3, **kwargs):
    """Least-squares slope of log(seconds per sweep) against log(nnz)."""
    nnz = np.array([inst.nnz for inst in instances], dtype=float)
    if len(instances) < 4 or nnz.max() < 8 * nnz.min():
        raise InsufficientData("need at least 4 instances spanning 8x in nnz")
    secs = np.array(sweep_times(instances, rounds, **kwargs))
    slope, intercept = np.polyfit(np.log(nnz), np.log(secs), 1)
    return TimingFit(float(slope), float(intercept), list(zip(nnz.astype(int).tolist(), secs.tolist())))


def milp_reference(instance, time_limit=None):
    """Optimal cost from the HiGHS MILP solver; ``None`` if not proven optimal."""
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import csr_matrix

    a = csr_matrix((np.ones(instance.nnz), instance.row_idx, instance.row_ptr),
                   shape=(instance.n_rows, instance.n_cols))
    options = {} if time_limit is None else {"time_limit": time_limit}
    res = milp(instance.costs, constraints=LinearConstraint(a, lb=1),
               integrality=np.ones(instance.n_cols), bounds=Bounds(0, 1), options=options)
    if res.status != 0:
        return None
    return float(np.round(res.fun, 6))


def _fmt(x, spec):
    return "-" if x is None else format(x, spec)


COLUMNS = ("name", "M", "N", "density", "reference", "best", "avg", "dev_%", "avg_dev_%",
           "feasible", "pub_best", "pub_avg")


def _rows(report, timing):
    for e in report.entries:
        pub = PUBLISHED.get(e.name)
        row = [
            e.name, str(e.n_rows), str(e.n_cols), f"{e.density:.4f}",
            _fmt(e.reference, "g"), _fmt(e.best_cost, "g"), _fmt(e.avg_cost, ".1f"),
            _fmt(None if e.rel_deviation is None else 100 * e.rel_deviation, ".2f"),
            _fmt(None if e.avg_rel_deviation is None else 100 * e.avg_rel_deviation, ".2f"),
            f"{e.n_feasible}/{e.n_trials}",
            _fmt(pub and pub[1], "g"), _fmt(pub and pub[2], "g"),
        ]
        if timing:
            row.append(_fmt(e.mean_seconds, ".3f"))
        yield row


def format_table(report, timing=True):
    """Aligned plain-text report with per-set mean deviations appended."""
    header = list(COLUMNS) + (["seconds"] if timing else [])
    rows = [header] + list(_rows(report, timing))
    widths = [max(len(r[j]) for r in rows) for j in range(len(header))]
    lines = ["  ".join(cell.rjust(w) if j else cell.ljust(w) for j, (cell, w) in
                       enumerate(zip(r, widths))).rstrip() for r in rows]
    best, avg = report.set_means(), report.set_means(avg=True)
    if best:
        lines.append("")
        lines.append("set  mean_dev_%  mean_avg_dev_%  pub_dev_%")
        for s in sorted(best, key=lambda s: _sort_key(s + ".0")):
            lines.append(f"{s:<4} {best[s]:>10.2f}  {avg.get(s, float('nan')):>14.2f}  "
                         f"{_fmt(PUBLISHED_SET_DEVIATION.get(s), '.1f'):>11}")
    return "\n".join(lines) + "\n"


def format_csv(report, timing=True):
    header = list(COLUMNS) + (["seconds"] if timing else [])
    out = [",".join(header)]
    out += [",".join(r) for r in _rows(report, timing)]
    return "\n".join(out) + "\n"
