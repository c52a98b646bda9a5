"""Sparse set-covering instances, statistics, evaluation and energy.

An instance is an M x N zero-one matrix A together with N column costs.
Indices are 0-based internally; the file formats are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadCost, BadIndex, DomainError, UnsatisfiableRow

PENALTY_MODES = ("multilinear", "piecewise")


def _readonly(a):
    a.setflags(write=False)
    return a


class ScpInstance:
    """Immutable sparse SCP instance stored in both CSR (rows) and CSC (columns) form."""

    def __init__(self, n_rows, n_cols, costs, row_ptr, row_idx, col_ptr, col_idx, name=None):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.costs = _readonly(np.asarray(costs, dtype=np.float64))
        cmax = self.costs.max() if self.n_cols else 0.0
        scaled = self.costs / cmax if cmax > 0 else np.zeros_like(self.costs)
        self.costs_scaled = _readonly(scaled)
        self.row_ptr = _readonly(np.asarray(row_ptr, dtype=np.int64))
        self.row_idx = _readonly(np.asarray(row_idx, dtype=np.int64))
        self.col_ptr = _readonly(np.asarray(col_ptr, dtype=np.int64))
        self.col_idx = _readonly(np.asarray(col_idx, dtype=np.int64))
        self.nnz = int(self.row_idx.size)
        self.name = name

    def row(self, k):
        """Sorted column indices covering row ``k``."""
        return self.row_idx[self.row_ptr[k]:self.row_ptr[k + 1]]

    def col(self, i):
        """Sorted row indices covered by column ``i``."""
        return self.col_idx[self.col_ptr[i]:self.col_ptr[i + 1]]

    @cached_property
    def rows(self):
        return [self.row(k) for k in range(self.n_rows)]

    @cached_property
    def cols(self):
        return [self.col(i) for i in range(self.n_cols)]

    @property
    def row_sums(self):
        return np.diff(self.row_ptr)

    @property
    def col_sums(self):
        return np.diff(self.col_ptr)

    @property
    def density(self):
        return self.nnz / (self.n_rows * self.n_cols)

    @property
    def is_unicost(self):
        return bool(self.costs.min() == self.costs.max())

    def __eq__(self, other):
        if not isinstance(other, ScpInstance):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and np.array_equal(self.costs, other.costs)
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.row_idx, other.row_idx)
        )

    __hash__ = None

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"ScpInstance({label}M={self.n_rows}, N={self.n_cols}, nnz={self.nnz})"


@dataclass(frozen=True)
class InstanceStats:
    density: float
    col_sums: np.ndarray
    row_sums: np.ndarray
    unicost: bool


def build_instance(n_rows, n_cols, costs, entries, *, one_based=False, name=None):
    """Build an instance from (row, col) pairs.

    ``entries`` is any iterable of pairs or an integer array of shape (nnz, 2).
    Duplicate pairs are coalesced.
    """
    n_rows, n_cols = int(n_rows), int(n_cols)
    if n_rows < 1 or n_cols < 1:
        raise BadIndex(f"instance needs M >= 1 and N >= 1, got M={n_rows}, N={n_cols}")
    costs = np.asarray(costs, dtype=np.float64)
    if costs.shape != (n_cols,):
        raise BadCost(f"expected {n_cols} costs, got shape {costs.shape}")
    if not np.all(np.isfinite(costs)):
        raise BadCost("costs must be finite")
    if np.any(costs < 0):
        raise BadCost(f"negative cost for column {int(np.argmax(costs < 0))}")

    pairs = np.asarray(entries if not isinstance(entries, (list, tuple)) else list(entries),
                       dtype=np.int64)
    if pairs.size == 0:
        pairs = pairs.reshape(0, 2)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise BadIndex("entries must be (row, col) pairs")
    if one_based:
        pairs = pairs - 1
    r, c = pairs[:, 0], pairs[:, 1]
    if r.size and (r.min() < 0 or r.max() >= n_rows):
        raise BadIndex(f"row index out of range [0, {n_rows})")
    if c.size and (c.min() < 0 or c.max() >= n_cols):
        raise BadIndex(f"column index out of range [0, {n_cols})")

    # first uncovered row, found without allocating anything of size M
    covered = np.unique(r)
    if covered.size < n_rows:
        gaps = np.nonzero(covered != np.arange(covered.size))[0]
        raise UnsatisfiableRow(int(gaps[0]) if gaps.size else int(covered.size))

    key = np.unique(r * n_cols + c)
    r, c = key // n_cols, key % n_cols  # sorted by row, then column
    row_ptr = np.zeros(n_rows + 1, dtype=np.int64)
    np.cumsum(np.bincount(r, minlength=n_rows), out=row_ptr[1:])
    order = np.lexsort((r, c))
    col_ptr = np.zeros(n_cols + 1, dtype=np.int64)
    np.cumsum(np.bincount(c, minlength=n_cols), out=col_ptr[1:])
    return ScpInstance(n_rows, n_cols, costs, row_ptr, c, col_ptr, r[order], name=name)


def stats(instance):
    return InstanceStats(
        density=instance.density,
        col_sums=instance.col_sums,
        row_sums=instance.row_sums,
        unicost=instance.is_unicost,
    )


def _selection_mask(instance, selection):
    mask = np.zeros(instance.n_cols, dtype=bool)
    sel = np.asarray(list(selection) if not isinstance(selection, np.ndarray) else selection,
                     dtype=np.int64)
    if sel.size and (sel.min() < 0 or sel.max() >= instance.n_cols):
        raise BadIndex("selected column out of range")
    mask[sel] = True
    return mask


def coverage_counts(instance, selection):
    """Number of selected columns covering each row."""
    mask = _selection_mask(instance, selection)
    return np.add.reduceat(mask[instance.row_idx].astype(np.int64), instance.row_ptr[:-1])


def evaluate(instance, selection):
    """Return ``(cost, feasible, uncovered_rows)`` for a set of column indices.

    The cost uses the original, unscaled column costs.
    """
    mask = _selection_mask(instance, selection)
    cost = float(instance.costs[mask].sum())
    counts = np.add.reduceat(mask[instance.row_idx].astype(np.int64), instance.row_ptr[:-1])
    uncovered = np.nonzero(counts == 0)[0].tolist()
    return cost, not uncovered, uncovered


def energy(instance, v, alpha, penalty_mode="multilinear"):
    """Energy of a mean-field configuration, with costs scaled into [0, 1].

    multilinear: sum_i c_i v_i + alpha * sum_k prod_{i in row k} (1 - v_i)
    piecewise:   sum_i c_i v_i + alpha * sum_k max(0, 1 - sum_{i in row k} v_i)
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (instance.n_cols,):
        raise DomainError(f"v must have shape ({instance.n_cols},)")
    if np.any(~((v >= 0.0) & (v <= 1.0))):
        raise DomainError("mean-field variables must lie in [0, 1]")
    cost = float(instance.costs_scaled @ v)
    starts = instance.row_ptr[:-1]
    if penalty_mode == "multilinear":
        penalty = np.multiply.reduceat(1.0 - v[instance.row_idx], starts).sum()
    elif penalty_mode == "piecewise":
        s = np.add.reduceat(v[instance.row_idx], starts)
        penalty = np.maximum(1.0 - s, 0.0).sum()
    else:
        raise ValueError(f"unknown penalty mode {penalty_mode!r}")
    return cost + alpha * float(penalty)
