"""Versioned JSON payload shared by the CLI and the solve service."""

SCHEMA_VERSION = 1


def solution_payload(instance, solution, *, trials, seed, include_columns=False, timing=True):
    out = {
        "schema": SCHEMA_VERSION,
        "cost": solution.cost,
        "feasible": solution.feasible,
        "uncovered_rows": solution.n_uncovered,
        "M": instance.n_rows,
        "N": instance.n_cols,
        "density": instance.density,
        "nnz": instance.nnz,
        "unicost": instance.is_unicost,
        "trials": trials,
        "seed": seed,
        "sweeps": solution.sweeps,
        "t_steps": solution.t_steps,
        "saturation": solution.final_saturation,
        "exhausted": solution.exhausted,
    }
    if timing:
        out["wall_seconds"] = solution.wall_seconds
    if include_columns:
        out["columns"] = solution.columns
    return out


def error_payload(kind, message):
    return {"schema": SCHEMA_VERSION, "error": kind, "message": message}
