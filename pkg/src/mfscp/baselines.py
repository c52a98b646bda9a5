"""Reference solvers: exhaustive search, ratio greedy, redundancy removal, repair."""

from __future__ import annotations

import time

import numpy as np

from .engine import Solution
from .errors import NotFeasible, TooLarge
from .instance import coverage_counts, evaluate


def exact_brute_force(instance, limit_n=25):
    """Minimum-cost cover by complete enumeration of column subsets.

    Depth-first over columns in index order, pruned by the running best cost
    and by rows whose last covering column has already been passed. Ties go
    to the lexicographically smallest column tuple.
    """
    n = instance.n_cols
    if n > limit_n:
        raise TooLarge(f"N={n} exceeds the enumeration limit {limit_n}")
    t_start = time.perf_counter()
    col_mask = [sum(1 << int(k) for k in instance.col(i)) for i in range(n)]
    full = (1 << instance.n_rows) - 1
    last_col = [int(instance.row(k)[-1]) for k in range(instance.n_rows)]
    # rows whose every covering column is < i
    closed = [sum(1 << k for k, last in enumerate(last_col) if last < i) for i in range(n + 1)]
    costs = [float(c) for c in instance.costs]
    best = [float("inf"), None]

    def visit(i, covered, cost, chosen):
        if cost > best[0]:
            return
        if covered == full:
            sel = tuple(chosen)
            if cost < best[0] or sel < best[1]:
                best[0], best[1] = cost, sel
            return
        if i == n or closed[i] & ~covered:
            return
        chosen.append(i)
        visit(i + 1, covered | col_mask[i], cost + costs[i], chosen)
        chosen.pop()
        visit(i + 1, covered, cost, chosen)

    visit(0, 0, 0.0, [])
    return Solution.from_selection(instance, best[1], wall_seconds=time.perf_counter() - t_start)


def _greedy_fill(instance, selected, uncovered):
    """Extend ``selected`` greedily until no row in ``uncovered`` (bool mask) is left."""
    cols_of_entry = np.repeat(np.arange(instance.n_cols), instance.col_sums)
    costs = instance.costs
    chosen = set(selected)
    uncovered = uncovered.copy()
    while uncovered.any():
        gain = np.bincount(cols_of_entry, weights=uncovered[instance.col_idx],
                           minlength=instance.n_cols).astype(np.int64)
        cand = np.nonzero(gain > 0)[0]
        ratio = costs[cand] / gain[cand]
        # ratio ascending, then coverage descending, then index ascending
        pick = int(cand[np.lexsort((cand, -gain[cand], ratio))[0]])
        chosen.add(pick)
        uncovered[instance.col(pick)] = False
    return chosen


def greedy(instance):
    """Classic cost / newly-covered-rows greedy."""
    t_start = time.perf_counter()
    chosen = _greedy_fill(instance, (), np.ones(instance.n_rows, dtype=bool))
    return Solution.from_selection(instance, chosen, wall_seconds=time.perf_counter() - t_start)


def remove_redundant(instance, solution):
    """Drop selected columns, most expensive first, while the cover stays feasible."""
    selected = solution.selected if isinstance(solution, Solution) else tuple(solution)
    counts = coverage_counts(instance, selected)
    if np.any(counts == 0):
        raise NotFeasible("cannot remove redundancy from an infeasible selection")
    keep = set(selected)
    for i in sorted(selected, key=lambda j: (-instance.costs[j], j)):
        rows = instance.col(i)
        if np.all(counts[rows] >= 2):
            counts[rows] -= 1
            keep.discard(i)
    return Solution.from_selection(instance, keep)


def greedy_repair(instance, solution):
    """Cover any uncovered rows greedily, then remove redundant columns."""
    selected = solution.selected if isinstance(solution, Solution) else tuple(solution)
    _, _, uncovered_rows = evaluate(instance, selected)
    mask = np.zeros(instance.n_rows, dtype=bool)
    mask[uncovered_rows] = True
    chosen = _greedy_fill(instance, selected, mask)
    return remove_redundant(instance, chosen)
