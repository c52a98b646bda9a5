"""Mean-field annealing for the set covering problem.

Each column i carries a mean-field variable v_i in (0, 1).  At temperature T
the variables are updated one at a time, in random order, by

    v_i = 1 / (1 + exp(dE_i / T)),
    dE_i = c_i - alpha * sum_{k in col i} prod_{j in row k, j != i} (1 - v_j),

with costs rescaled to [0, 1].  T is lowered geometrically once a sweep
changes the variables by less than ``converge_tol`` on average, and the run
stops when the saturation (4/N) sum_i (v_i - 1/2)^2 reaches (N - 0.5)/N.

Non-unicost problems first get a quick prerun whose solution fixes the
penalty weight (1.05 times the largest selected scaled cost) and whose
saturation onset locates the critical temperature (the main run starts at
twice that).
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field, fields, replace
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .errors import FallbackParameters, ResourceExhausted
from .instance import PENALTY_MODES, evaluate, stats

REFRESH_EVERY = 64
TC_ONSET = 0.01
TRUNC_EPS = 0.05
TRUNC_THRESHOLD = 10**7

_MODE_CODES = {"multilinear": K.MULTILINEAR, "piecewise": K.PIECEWISE}


@dataclass(frozen=True)
class SolverParams:
    """Parameters of one annealing run.

    The defaults are the unicost set (k=0.80, alpha=0.5, T0=50).
    """

    k_anneal: float = 0.80
    alpha: float = 0.5
    t0: float = 50.0
    converge_tol: float = 0.01
    init_halfwidth: float = 0.001
    trunc_eps: float = 0.0
    penalty_mode: str = "multilinear"
    max_sweeps_per_T: int = 200
    max_T_steps: int = 400
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.k_anneal < 1.0:
            raise ValueError(f"k_anneal must lie in (0, 1), got {self.k_anneal}")
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.t0 > 0.0:
            raise ValueError(f"t0 must be positive, got {self.t0}")
        if not 0.0 <= self.trunc_eps < 0.5:
            raise ValueError(f"trunc_eps must lie in [0, 0.5), got {self.trunc_eps}")
        if not 0.0 <= self.init_halfwidth <= 0.5:
            raise ValueError("init_halfwidth must lie in [0, 0.5]")
        if self.penalty_mode not in PENALTY_MODES:
            raise ValueError(f"penalty_mode must be one of {PENALTY_MODES}")
        if self.max_sweeps_per_T < 1 or self.max_T_steps < 1:
            raise ValueError("safety caps must be positive")

    def replace(self, **changes):
        return replace(self, **changes)


UNICOST_PARAMS = SolverParams(k_anneal=0.80, alpha=1.05, t0=50.0)
PRERUN_PARAMS = SolverParams(k_anneal=0.65, alpha=1.01, t0=50.0)
MAIN_K_ANNEAL = 0.80


@dataclass
class MfState:
    v: np.ndarray
    row_prod: np.ndarray
    row_sum: np.ndarray
    trunc_prod: np.ndarray
    truncated: np.ndarray
    temperature: float
    trunc_eps: float
    rng: np.random.Generator
    sweep_count: int = 0
    t_step_count: int = 0


@dataclass
class Solution:
    """A 0/1 selection of columns (0-based indices) and its diagnostics."""

    selected: tuple
    cost: float
    feasible: bool
    sweeps: int = 0
    t_steps: int = 0
    wall_seconds: float = field(default=0.0, compare=False)
    final_saturation: float = 0.0
    exhausted: bool = False
    n_uncovered: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_selection(cls, instance, selected, **kwargs):
        selected = tuple(sorted(int(i) for i in set(selected)))
        cost, feasible, uncovered = evaluate(instance, selected)
        return cls(selected=selected, cost=cost, feasible=feasible,
                   n_uncovered=len(uncovered), **kwargs)

    @property
    def columns(self):
        """Selected columns, 1-based, as in the file formats."""
        return [i + 1 for i in self.selected]

    def rank(self):
        return (not self.feasible, self.cost)


class TraceRecord(NamedTuple):
    t_step: int
    temperature: float
    sigma: float
    mean_change: float
    sweeps: int


class PrerunResult(NamedTuple):
    c_max_star: float
    t_c_est: float
    solution: Solution
    fallback: bool


def _mode(penalty_mode):
    return _MODE_CODES[penalty_mode]


def refresh_caches(instance, state):
    K.refresh(state.v, instance.row_ptr, instance.row_idx, state.row_prod, state.row_sum)
    if state.trunc_eps > 0.0:
        K.refresh_trunc(state.v, instance.row_ptr, instance.row_idx, state.trunc_prod,
                        state.truncated, state.trunc_eps)


def init_state(instance, params, rng=None):
    """Start every v_i uniformly in [0.5 - h, 0.5 + h] at T = t0."""
    if rng is None:
        rng = np.random.default_rng(params.seed)
    h = params.init_halfwidth
    n = instance.n_cols
    v = rng.uniform(0.5 - h, 0.5 + h, n) if h > 0 else np.full(n, 0.5)
    np.clip(v, K.V_MIN, K.V_MAX, out=v)
    m = instance.n_rows
    state = MfState(
        v=v,
        row_prod=np.empty(m),
        row_sum=np.empty(m),
        trunc_prod=np.ones(m),
        truncated=np.zeros(n, dtype=np.bool_),
        temperature=float(params.t0),
        trunc_eps=float(params.trunc_eps),
        rng=rng,
    )
    refresh_caches(instance, state)
    return state


def _args(instance, state):
    return (state.v, instance.costs_scaled, instance.col_ptr, instance.col_idx,
            state.row_prod, state.row_sum, state.trunc_prod, state.truncated)


def delta_e(instance, state, i, alpha, penalty_mode="multilinear"):
    """Energy change E(v_i = 1) - E(v_i = 0) with the other variables held fixed."""
    return K.delta_e(int(i), *_args(instance, state), float(alpha), _mode(penalty_mode),
                     state.trunc_eps > 0.0)


def update_variable(instance, state, i, alpha, params):
    """Apply the mean-field update to v_i; returns |v_new - v_old|."""
    return K.update(int(i), *_args(instance, state), float(alpha), state.temperature,
                    _mode(params.penalty_mode), state.trunc_eps > 0.0)


def sweep(instance, state, alpha, params):
    """Update every variable once in a fresh random order; returns the mean |change|."""
    if state.sweep_count and state.sweep_count % REFRESH_EVERY == 0:
        K.refresh(state.v, instance.row_ptr, instance.row_idx, state.row_prod, state.row_sum)
    if state.trunc_eps > 0.0:
        K.refresh_trunc(state.v, instance.row_ptr, instance.row_idx, state.trunc_prod,
                        state.truncated, state.trunc_eps)
    order = state.rng.permutation(instance.n_cols)
    total = K.sweep(order, *_args(instance, state), float(alpha), state.temperature,
                    _mode(params.penalty_mode), state.trunc_eps > 0.0)
    state.sweep_count += 1
    return total / instance.n_cols


def saturation(state):
    v = state.v if isinstance(state, MfState) else np.asarray(state, dtype=np.float64)
    return float(4.0 * np.mean((v - 0.5) ** 2))


def estimate_tc_unicost(instance, alpha):
    """Critical temperature alpha * rho^2 * M * 2^(-rho N) for uniform unicost problems.

    Returns 0.0 on underflow, which means "no estimate".
    """
    rho = stats(instance).density
    return float(alpha * rho**2 * instance.n_rows * 2.0 ** (-rho * instance.n_cols))


def anneal(instance, params, rng=None):
    """Run one annealing schedule; returns ``(solution, trace)``."""
    t_start = time.perf_counter()
    state = init_state(instance, params, rng)
    n = instance.n_cols
    threshold = (n - 0.5) / n
    trace = []
    saturated = False
    sigma = saturation(state)
    for step in range(params.max_T_steps):
        if step:
            refresh_caches(instance, state)
        n_here = 0
        while True:
            change = sweep(instance, state, params.alpha, params)
            n_here += 1
            if change <= params.converge_tol or n_here >= params.max_sweeps_per_T:
                break
        sigma = saturation(state)
        trace.append(TraceRecord(step, state.temperature, sigma, change, n_here))
        state.t_step_count += 1
        if sigma >= threshold:
            saturated = True
            break
        state.temperature *= params.k_anneal

    selected = np.nonzero(state.v >= 0.5)[0]
    solution = Solution.from_selection(
        instance, selected,
        sweeps=state.sweep_count,
        t_steps=state.t_step_count,
        final_saturation=sigma,
        exhausted=not saturated,
        wall_seconds=time.perf_counter() - t_start,
    )
    if not saturated:
        warnings.warn(
            f"annealing stopped by the {params.max_T_steps}-step cap at saturation {sigma:.4f}",
            RuntimeWarning, stacklevel=2,
        )
    return solution, trace


def prerun(instance, params=None, rng=None):
    """Quick anneal used to pick alpha and T0 for a non-unicost main run.

    ``c_max_star`` is the largest scaled cost among the prerun's selected
    columns and ``t_c_est`` the first temperature at which the saturation
    rises above ``TC_ONSET``.
    """
    params = params or PRERUN_PARAMS
    solution, trace = anneal(instance, params, rng)
    return _prerun_result(instance, params, solution, trace)


def _prerun_result(instance, params, solution, trace):
    t_c = next((rec.temperature for rec in trace if rec.sigma > TC_ONSET), None)
    fallback = False
    if solution.selected:
        c_max_star = float(instance.costs_scaled[list(solution.selected)].max())
    else:
        c_max_star, fallback = 1.0, True
    if t_c is None or fallback:
        t_c, fallback = params.t0 / 10.0, True
    if fallback:
        warnings.warn("prerun gave no usable solution; using c_max*=1 and T_c=T0/10",
                      FallbackParameters, stacklevel=2)
    if c_max_star <= 0.0:
        # all selected columns are free; any positive penalty keeps coverage
        c_max_star = 1.0
    return PrerunResult(c_max_star, float(t_c), solution, fallback)


_RUN_KEYS = {f.name for f in fields(SolverParams)}
_SOLVE_KEYS = _RUN_KEYS | {"unicost", "trunc_threshold", "strict"}


def solve(instance, overrides=None, **kwargs):
    """Solve with the two-phase procedure; explicit overrides beat derived values.

    Keyword overrides are any :class:`SolverParams` field plus ``unicost``
    (force or forbid the unicost parameter set), ``trunc_threshold`` (nnz above
    which truncation switches on) and ``strict`` (raise
    :class:`ResourceExhausted` instead of returning an exhausted solution).
    """
    opts = {**(overrides or {}), **kwargs}
    opts = {key: val for key, val in opts.items() if val is not None}
    unknown = set(opts) - _SOLVE_KEYS
    if unknown:
        raise TypeError(f"unknown solver option(s): {sorted(unknown)}")
    t_start = time.perf_counter()
    unicost = opts.pop("unicost", instance.is_unicost)
    strict = opts.pop("strict", False)
    trunc_threshold = opts.pop("trunc_threshold", TRUNC_THRESHOLD)
    common = {key: opts[key] for key in opts
              if key not in ("k_anneal", "alpha", "t0")}
    common.setdefault("trunc_eps", TRUNC_EPS if instance.nnz > trunc_threshold else 0.0)
    rng = np.random.default_rng(common.get("seed", 0))

    meta = {"unicost": bool(unicost), "trunc_eps": common["trunc_eps"]}
    candidates = []
    if unicost:
        params = UNICOST_PARAMS.replace(**common).replace(
            **{key: opts[key] for key in ("k_anneal", "alpha", "t0") if key in opts})
    else:
        main = {"k_anneal": opts.get("k_anneal", MAIN_K_ANNEAL)}
        if "alpha" in opts and "t0" in opts:
            main.update(alpha=opts["alpha"], t0=opts["t0"])
        else:
            pre_params = PRERUN_PARAMS.replace(**common)
            pre_solution, pre_trace = anneal(instance, pre_params, rng)
            pre = _prerun_result(instance, pre_params, pre_solution, pre_trace)
            meta["prerun_trace"] = pre_trace
            meta.update(c_max_star=pre.c_max_star, t_c_est=pre.t_c_est,
                        prerun_cost=pre.solution.cost, prerun_fallback=pre.fallback)
            main["alpha"] = opts.get("alpha", 1.05 * pre.c_max_star)
            main["t0"] = opts.get("t0", 2.0 * pre.t_c_est)
            if "alpha" not in opts:
                candidates.append(("prerun", pre.solution))
        params = SolverParams(**{**common, **main})

    meta.update(alpha=params.alpha, t0=params.t0, k_anneal=params.k_anneal)
    main_solution, meta["trace"] = anneal(instance, params, rng)
    candidates.insert(0, ("main", main_solution))
    source, best = min(candidates, key=lambda kv: kv[1].rank())
    meta["source"] = source
    result = replace(
        best,
        sweeps=sum(s.sweeps for _, s in candidates),
        t_steps=sum(s.t_steps for _, s in candidates),
        wall_seconds=time.perf_counter() - t_start,
        meta=meta,
    )
    if strict and main_solution.exhausted:
        raise ResourceExhausted("annealing hit its safety caps before saturating", result)
    return result


def solve_trials(instance, n_trials=1, base_seed=0, overrides=None):
    """Best-of-n over seeds ``base_seed .. base_seed + n - 1``; returns ``(best, all)``."""
    overrides = dict(overrides or {})
    sols = [solve(instance, {**overrides, "seed": base_seed + t}) for t in range(n_trials)]
    best = min(sols, key=Solution.rank)
    return best, sols


def write_trace(trace, fh):
    """Write ``t_step,T,sigma,mean_change`` records as CSV to an open text file."""
    fh.write("t_step,T,sigma,mean_change\n")
    for rec in trace:
        fh.write(f"{rec.t_step},{rec.temperature!r},{rec.sigma!r},{rec.mean_change!r}\n")
