"""Mean-field annealing solver for the set covering problem."""

from .errors import *  # noqa: F401,F403
from .instance import ScpInstance, InstanceStats, build_instance, stats, evaluate, energy
from .formats import FormatKind, parse, parse_auto, emit, detect_format, read_instance
from .engine import (
    SolverParams, MfState, Solution, TraceRecord, init_state, delta_e, update_variable,
    sweep, saturation, estimate_tc_unicost, anneal, prerun, solve, solve_trials,
)

__version__ = "0.1.0"
