import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from mfscp.formats import parse
from mfscp.instance import build_instance

DATA = Path(__file__).parent / "data"
SURROGATE = DATA / "surrogate"
SURROGATE_REFERENCE = DATA / "surrogate_reference.txt"
ORLIB_DIR = Path(os.environ.get("MFSCP_ORLIB_DIR", Path(__file__).parents[1] / "data" / "orlib"))


@pytest.fixture(scope="session")
def appendix_row_bytes():
    return (DATA / "appendix_row.txt").read_bytes()


@pytest.fixture(scope="session")
def appendix_col_bytes():
    return (DATA / "appendix_col.txt").read_bytes()


@pytest.fixture(scope="session")
def appendix(appendix_row_bytes):
    return parse(appendix_row_bytes, "row", name="appendix")


def dense(instance):
    a = np.zeros((instance.n_rows, instance.n_cols), dtype=int)
    for k in range(instance.n_rows):
        a[k, instance.row(k)] = 1
    return a


@st.composite
def instances(draw, max_rows=8, max_cols=10, unicost=None):
    """Random feasible instances; every row gets at least one column."""
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    entries = set()
    for k in range(m):
        cols = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n))
        entries.update((k, j) for j in cols)
    uni = draw(st.booleans()) if unicost is None else unicost
    if uni:
        costs = [1.0] * n
    else:
        costs = draw(st.lists(st.integers(1, 1000), min_size=n, max_size=n))
    return build_instance(m, n, costs, sorted(entries))


ACCEPTANCE = []


def record(criterion, ok, detail):
    """Log one acceptance line; it is echoed in the terminal summary."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE.append(line)
    print(line, flush=True)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


def orlib_file(stem):
    """Path of an OR-Library file in ORLIB_DIR, with or without ``.txt``."""
    for name in (stem, stem + ".txt"):
        if (ORLIB_DIR / name).is_file():
            return ORLIB_DIR / name
    return None
