import io
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfscp import engine
from mfscp.engine import (PRERUN_PARAMS, UNICOST_PARAMS, SolverParams, anneal, delta_e,
                          estimate_tc_unicost, init_state, prerun, refresh_caches, saturation,
                          solve, solve_trials, sweep, update_variable, write_trace)
from mfscp.errors import FallbackParameters, ResourceExhausted
from mfscp.generators import random_instance
from mfscp.instance import build_instance, energy

from conftest import instances


def set_v(instance, state, v):
    state.v[:] = v
    refresh_caches(instance, state)


def test_params_validation():
    with pytest.raises(ValueError):
        SolverParams(k_anneal=1.0)
    with pytest.raises(ValueError):
        SolverParams(t0=0.0)
    with pytest.raises(ValueError):
        SolverParams(alpha=-1.0)
    with pytest.raises(ValueError):
        SolverParams(penalty_mode="cubic")
    assert SolverParams().replace(seed=3).seed == 3


def test_table_parameters():
    assert (PRERUN_PARAMS.k_anneal, PRERUN_PARAMS.alpha, PRERUN_PARAMS.t0) == (0.65, 1.01, 50.0)
    assert (UNICOST_PARAMS.k_anneal, UNICOST_PARAMS.t0) == (0.80, 50.0)
    assert engine.MAIN_K_ANNEAL == 0.80


def test_delta_e_appendix(appendix):
    params = SolverParams(alpha=1.0, init_halfwidth=0.0)
    state = init_state(appendix, params)
    # 0.2 - (1/4 + 1/4): the two rows of column 1 each keep two other factors of 1/2
    assert delta_e(appendix, state, 0, 1.0) == pytest.approx(-0.3, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(instances(), st.floats(0.0, 5.0), st.data())
def test_delta_e_is_two_point_difference(inst, alpha, data):
    for mode in ("multilinear", "piecewise"):
        params = SolverParams(alpha=alpha, penalty_mode=mode)
        state = init_state(inst, params, np.random.default_rng(inst.nnz))
        set_v(inst, state, np.random.default_rng(inst.n_rows).uniform(0.01, 0.99, inst.n_cols))
        i = data.draw(st.integers(0, inst.n_cols - 1))
        hi, lo = state.v.copy(), state.v.copy()
        hi[i], lo[i] = 1.0, 0.0
        want = energy(inst, hi, alpha, mode) - energy(inst, lo, alpha, mode)
        assert delta_e(inst, state, i, alpha, mode) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_update_rule(appendix):
    params = SolverParams(alpha=1.0, init_halfwidth=0.0, t0=0.1)
    state = init_state(appendix, params)
    update_variable(appendix, state, 0, 1.0, params)
    # sigmoid(-dE / T) with dE = -0.3, T = 0.1
    assert state.v[0] == pytest.approx(1.0 / (1.0 + math.exp(-3.0)), rel=1e-12)
    assert state.v[0] == pytest.approx(0.9526, abs=1e-4)


def test_extreme_temperature_is_clamped(appendix):
    params = SolverParams(alpha=1.0, t0=1e-300)
    state = init_state(appendix, params)
    for _ in range(5):
        sweep(appendix, state, 1.0, params)
    assert np.all(np.isfinite(state.v))
    assert np.all((state.v > 0.0) & (state.v < 1.0))
    assert np.all(np.isfinite(state.row_prod))


def test_cache_consistency_after_updates():
    inst = random_instance(np.random.default_rng(5), 60, 80, 0.1)
    params = SolverParams(alpha=1.3, t0=0.3)
    state = init_state(inst, params)
    rng = np.random.default_rng(6)
    for i in rng.integers(0, inst.n_cols, 10_000):
        update_variable(inst, state, i, params.alpha, params)
    cached = state.row_prod.copy()
    refresh_caches(inst, state)
    np.testing.assert_allclose(cached, state.row_prod, rtol=1e-9, atol=0)


def test_high_temperature_fixed_point():
    inst = random_instance(np.random.default_rng(1), 30, 50, 0.3)
    params = SolverParams(alpha=2.0, t0=1e9)
    state = init_state(inst, params)
    set_v(inst, state, np.random.default_rng(2).uniform(1e-6, 1 - 1e-6, inst.n_cols))
    sweep(inst, state, params.alpha, params)
    assert np.max(np.abs(state.v - 0.5)) < 1e-6


def test_saturation():
    assert saturation(np.full(4, 0.5)) == 0.0
    assert saturation(np.array([0.0, 1.0, 1.0, 0.0])) == 1.0
    assert saturation(np.array([0.75, 0.25])) == pytest.approx(0.25)


def test_estimate_tc_unicost():
    inst = build_instance(2, 2, [1, 1], [(0, 0), (1, 1)])
    assert estimate_tc_unicost(inst, 1.0) == pytest.approx(0.25 * 2 * 2**-1)


def test_anneal_saturates_and_traces(appendix):
    sol, trace = anneal(appendix, SolverParams(alpha=1.05, k_anneal=0.8, t0=5.0))
    assert not sol.exhausted
    assert sol.final_saturation >= (5 - 0.5) / 5
    assert [r.t_step for r in trace] == list(range(len(trace)))
    temps = [r.temperature for r in trace]
    assert all(b == pytest.approx(0.8 * a) for a, b in zip(temps, temps[1:]))
    assert sol.sweeps == sum(r.sweeps for r in trace)


def test_tie_at_half_selects():
    inst = build_instance(2, 3, [0, 0, 0], [(0, 0), (1, 1), (1, 2)])
    params = SolverParams(alpha=0.0, init_halfwidth=0.0, max_T_steps=1)
    with pytest.warns(RuntimeWarning):
        sol, _ = anneal(inst, params)
    assert sol.selected == (0, 1, 2)
    assert sol.exhausted


def test_cost_is_unscaled(appendix):
    sol = solve(appendix)
    assert sol.cost == sum(appendix.costs[list(sol.selected)])


def test_solve_appendix(appendix):
    sol = solve(appendix)
    assert sol.feasible and sol.cost == 5.0
    assert sol.meta["alpha"] == pytest.approx(1.05 * sol.meta["c_max_star"])
    assert sol.meta["t0"] == pytest.approx(2 * sol.meta["t_c_est"])
    assert len(sol.meta["prerun_trace"]) > 0


def test_alpha_zero_is_infeasible(appendix):
    sol = solve(appendix, alpha=0.0)
    assert not sol.feasible
    assert sol.n_uncovered > 0
    assert sol.meta["source"] == "main"


def test_overrides_win(appendix):
    sol = solve(appendix, alpha=2.0, t0=3.0, k_anneal=0.7)
    assert (sol.meta["alpha"], sol.meta["t0"], sol.meta["k_anneal"]) == (2.0, 3.0, 0.7)
    assert "prerun_trace" not in sol.meta


def test_unicost_dispatch():
    inst = random_instance(np.random.default_rng(3), 20, 40, 0.2, unicost=True)
    sol = solve(inst)
    assert sol.meta["unicost"]
    assert sol.meta["alpha"] == UNICOST_PARAMS.alpha
    assert sol.meta["t0"] == 50.0
    assert "prerun_trace" not in sol.meta
    assert solve(inst, unicost=False).meta.get("c_max_star") == 1.0


def test_truncation_switch(appendix):
    assert solve(appendix).meta["trunc_eps"] == 0.0
    sol = solve(appendix, trunc_threshold=5)
    assert sol.meta["trunc_eps"] == engine.TRUNC_EPS
    assert sol.feasible
    assert solve(appendix, trunc_threshold=5, trunc_eps=0.0).meta["trunc_eps"] == 0.0


def test_truncated_delta_e_skips_saturated_factors(appendix):
    params = SolverParams(alpha=1.0, trunc_eps=0.05)
    state = init_state(appendix, params)
    v = np.array([0.5, 0.5, 0.01, 0.5, 0.5])
    set_v(appendix, state, v)
    # row 1 holds columns 1, 3 and 5; v_3 < eps counts as 0, so its factor is 1
    assert delta_e(appendix, state, 0, 1.0) == pytest.approx(0.2 - (0.5 + 0.25), abs=1e-12)
    state.trunc_eps = 0.0
    assert delta_e(appendix, state, 0, 1.0) == pytest.approx(0.2 - (0.99 * 0.5 + 0.25), abs=1e-12)


def test_piecewise_solve(appendix):
    assert solve(appendix, penalty_mode="piecewise").feasible


def test_unknown_option(appendix):
    with pytest.raises(TypeError):
        solve(appendix, temperature=3)


def test_strict_raises(appendix):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        warnings.simplefilter("ignore", FallbackParameters)
        with pytest.raises(ResourceExhausted) as info:
            solve(appendix, max_T_steps=1, strict=True)
    assert info.value.solution is not None


def test_prerun_result(appendix):
    res = prerun(appendix)
    assert res.solution.selected
    assert res.c_max_star == max(appendix.costs_scaled[list(res.solution.selected)])
    assert 0 < res.t_c_est <= 50.0
    assert not res.fallback


def test_uniform_costs_give_cmax_one():
    inst = random_instance(np.random.default_rng(4), 10, 20, 0.3, unicost=True)
    assert prerun(inst).c_max_star == 1.0


def test_prerun_fallback():
    # free columns and no penalty: nothing saturates and nothing is selected
    inst = build_instance(1, 2, [1, 1], [(0, 0), (0, 1)])
    params = PRERUN_PARAMS.replace(alpha=0.0, max_T_steps=3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        with pytest.warns(FallbackParameters):
            res = prerun(inst, params)
    assert res.fallback
    assert (res.c_max_star, res.t_c_est) == (1.0, 5.0)


def test_determinism(appendix):
    inst = random_instance(np.random.default_rng(8), 40, 120, 0.08)
    a, b = solve(inst, seed=11), solve(inst, seed=11)
    assert a == b
    assert a.meta["trace"] == b.meta["trace"]


def test_solve_trials_seeds(appendix):
    best, sols = solve_trials(appendix, 3, base_seed=4)
    assert sols == [solve(appendix, seed=s) for s in (4, 5, 6)]
    assert best == min(sols, key=lambda s: s.rank())


def test_write_trace(appendix):
    sol = solve(appendix)
    buf = io.StringIO()
    write_trace(sol.meta["trace"], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t_step,T,sigma,mean_change"
    assert len(lines) == len(sol.meta["trace"]) + 1
