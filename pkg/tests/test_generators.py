import numpy as np
import pytest

from mfscp.generators import (beasley_instance, hypercube_cycle_instance, random_instance,
                              sparse_instance)


def test_random_instance_density():
    inst = random_instance(np.random.default_rng(0), 200, 300, 0.1)
    assert inst.density == pytest.approx(0.1, abs=0.01)
    assert inst.row_sums.min() >= 1
    assert 1 <= inst.costs.min() and inst.costs.max() <= 100


def test_beasley_instance_shape():
    inst = beasley_instance(np.random.default_rng(1), 200, 1000, 0.02)
    assert (inst.n_rows, inst.n_cols) == (200, 1000)
    assert inst.density == pytest.approx(0.02, abs=1e-6)
    assert inst.row_sums.min() >= 2
    assert inst.col_sums.min() >= 1


def test_unicost_flag():
    assert beasley_instance(np.random.default_rng(2), 50, 500, 0.2, unicost=True).is_unicost


def test_sparse_instance_nnz():
    inst = sparse_instance(np.random.default_rng(3), 1000, 5000, 20_000)
    assert 0.95 * 20_000 <= inst.nnz <= 20_000


@pytest.mark.parametrize("dim, m, n", [(3, 6, 12), (4, 24, 32), (6, 240, 192), (7, 672, 448)])
def test_hypercube_cycles(dim, m, n):
    inst = hypercube_cycle_instance(dim)
    assert (inst.n_rows, inst.n_cols) == (m, n)
    assert set(inst.row_sums.tolist()) == {4}
    # every edge lies in dim - 1 four-cycles
    assert set(inst.col_sums.tolist()) == {dim - 1}
    assert inst.is_unicost


def test_generators_deterministic():
    a = beasley_instance(np.random.default_rng(9), 30, 60, 0.1)
    b = beasley_instance(np.random.default_rng(9), 30, 60, 0.1)
    assert a == b
