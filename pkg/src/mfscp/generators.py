"""Random and structured instance generators."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .instance import build_instance


def random_instance(rng, n_rows, n_cols, density, cost_range=(1, 100), unicost=False, name=None):
    """Bernoulli(density) entries; rows left empty get one random column."""
    a = rng.random((n_rows, n_cols)) < density
    empty = ~a.any(axis=1)
    a[np.nonzero(empty)[0], rng.integers(0, n_cols, int(empty.sum()))] = True
    costs = (np.ones(n_cols) if unicost
             else rng.integers(cost_range[0], cost_range[1] + 1, n_cols).astype(float))
    return build_instance(n_rows, n_cols, costs, np.argwhere(a), name=name)


def beasley_instance(rng, n_rows, n_cols, density, cost_range=(1, 100), unicost=False, name=None):
    """Instances in the style of the OR-Library random sets.

    Every row is covered by at least two columns, every column covers at
    least one row, and the remaining ones are spread uniformly to reach the
    target density.  Costs are uniform integers in ``cost_range``.
    """
    target = int(round(density * n_rows * n_cols))
    pairs = set()
    for k in range(n_rows):
        for j in rng.choice(n_cols, 2, replace=False):
            pairs.add((k, int(j)))
    for j in range(n_cols):
        pairs.add((int(rng.integers(n_rows)), j))
    while len(pairs) < target:
        need = target - len(pairs)
        ks = rng.integers(0, n_rows, need)
        js = rng.integers(0, n_cols, need)
        pairs.update(zip(ks.tolist(), js.tolist()))
    costs = (np.ones(n_cols) if unicost
             else rng.integers(cost_range[0], cost_range[1] + 1, n_cols).astype(float))
    return build_instance(n_rows, n_cols, costs, sorted(pairs), name=name)


def sparse_instance(rng, n_rows, n_cols, nnz, name=None):
    """Approximately ``nnz`` ones at uniform positions, every row covered."""
    ks = np.concatenate([np.arange(n_rows), rng.integers(0, n_rows, max(nnz - n_rows, 0))])
    js = rng.integers(0, n_cols, ks.size)
    costs = rng.integers(1, 101, n_cols).astype(float)
    return build_instance(n_rows, n_cols, costs, np.column_stack([ks, js]), name=name)


def hypercube_cycle_instance(dim, name=None):
    """Unicost cover of all 4-cycles of the hypercube Q_dim by its edges.

    Columns are the dim * 2^(dim-1) edges, rows the C(dim, 2) * 2^(dim-2)
    4-cycles; each row has exactly four ones.  dim=6 gives 240 rows and 192
    columns, the dimensions of the OR-Library CYC6 problem.
    """
    edges = {}
    for x in range(2**dim):
        for b in range(dim):
            if not x >> b & 1:
                edges[(x, b)] = len(edges)
    entries = []
    row = 0
    for a, b in combinations(range(dim), 2):
        for x in range(2**dim):
            if x >> a & 1 or x >> b & 1:
                continue
            xa, xb = x | 1 << a, x | 1 << b
            for e in (edges[(x, a)], edges[(x, b)], edges[(xa, b)], edges[(xb, a)]):
                entries.append((row, e))
            row += 1
    return build_instance(row, len(edges), np.ones(len(edges)), entries, name=name)
