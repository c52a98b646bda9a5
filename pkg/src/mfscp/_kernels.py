"""Compiled inner loops for the mean-field sweep.

All arrays are CSR/CSC views of the instance plus the mutable state caches:

    row_prod[k]   = prod_{j in row k} (1 - v_j)
    row_sum[k]    = sum_{j in row k} v_j
    trunc_prod[k] = prod_{j in row k, not truncated[j]} (1 - v_j)

A sweep keeps current only the caches its penalty reads: row_prod and
trunc_prod for the multilinear penalty, row_sum for the piecewise one.
``refresh`` recomputes both.
"""

import numpy as np
from numba import njit as _njit

# Nothing here allocates, so the NRT is off: with it on, every nested call
# increfs and decrefs eight arrays, which costs more per column than the
# column's own arithmetic and breaks the O(nnz) sweep cost.
def njit(**kwargs):
    return _njit(_nrt=False, **kwargs)

V_MIN = 1e-12
V_MAX = 1.0 - 1e-12
EXP_CLAMP = 500.0

MULTILINEAR = 0
PIECEWISE = 1


@njit(cache=True, nogil=True, inline="always")
def delta_e(i, v, costs, col_ptr, col_idx, row_prod, row_sum, trunc_prod, truncated,
            alpha, mode, use_trunc):
    acc = 0.0
    lo, hi = col_ptr[i], col_ptr[i + 1]
    if mode == PIECEWISE:
        for p in range(lo, hi):
            x = 1.0 - (row_sum[col_idx[p]] - v[i])
            if x > 0.0:
                acc += x
    elif use_trunc:
        if truncated[i]:
            for p in range(lo, hi):
                acc += trunc_prod[col_idx[p]]
        else:
            inv = 1.0 / (1.0 - v[i])
            for p in range(lo, hi):
                acc += trunc_prod[col_idx[p]] * inv
    else:
        inv = 1.0 / (1.0 - v[i])
        for p in range(lo, hi):
            acc += row_prod[col_idx[p]] * inv
    return costs[i] - alpha * acc


@njit(cache=True, nogil=True, inline="always")
def update(i, v, costs, col_ptr, col_idx, row_prod, row_sum, trunc_prod, truncated,
           alpha, temperature, mode, use_trunc):
    de = delta_e(i, v, costs, col_ptr, col_idx, row_prod, row_sum, trunc_prod, truncated,
                 alpha, mode, use_trunc)
    x = de / temperature
    if x > EXP_CLAMP:
        x = EXP_CLAMP
    elif x < -EXP_CLAMP:
        x = -EXP_CLAMP
    vn = 1.0 / (1.0 + np.exp(x))
    if vn < V_MIN:
        vn = V_MIN
    elif vn > V_MAX:
        vn = V_MAX
    vo = v[i]
    if vn != vo:
        if mode == PIECEWISE:
            dv = vn - vo
            for p in range(col_ptr[i], col_ptr[i + 1]):
                row_sum[col_idx[p]] += dv
        else:
            ratio = (1.0 - vn) / (1.0 - vo)
            if use_trunc and not truncated[i]:
                for p in range(col_ptr[i], col_ptr[i + 1]):
                    k = col_idx[p]
                    row_prod[k] *= ratio
                    trunc_prod[k] *= ratio
            else:
                for p in range(col_ptr[i], col_ptr[i + 1]):
                    row_prod[col_idx[p]] *= ratio
        v[i] = vn
    return abs(vn - vo)


@njit(cache=True, nogil=True)
def sweep(order, v, costs, col_ptr, col_idx, row_prod, row_sum, trunc_prod, truncated,
          alpha, temperature, mode, use_trunc):
    total = 0.0
    for i in order:
        total += update(i, v, costs, col_ptr, col_idx, row_prod, row_sum, trunc_prod,
                        truncated, alpha, temperature, mode, use_trunc)
    return total


@njit(cache=True, nogil=True)
def refresh(v, row_ptr, row_idx, row_prod, row_sum):
    for k in range(row_ptr.size - 1):
        p = 1.0
        s = 0.0
        for q in range(row_ptr[k], row_ptr[k + 1]):
            j = row_idx[q]
            p *= 1.0 - v[j]
            s += v[j]
        row_prod[k] = p
        row_sum[k] = s


@njit(cache=True, nogil=True)
def refresh_trunc(v, row_ptr, row_idx, trunc_prod, truncated, eps):
    for j in range(v.size):
        truncated[j] = v[j] < eps
    for k in range(row_ptr.size - 1):
        p = 1.0
        for q in range(row_ptr[k], row_ptr[k + 1]):
            j = row_idx[q]
            if not truncated[j]:
                p *= 1.0 - v[j]
        trunc_prod[k] = p
