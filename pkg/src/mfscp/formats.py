"""Row-ordering and column-ordering SCP file formats.

Both are whitespace-separated token streams (line breaks carry no meaning),
with 1-based indices.

Row ordering::

    M N
    c_1 ... c_N
    (for each row k)    count_k  j_1 ... j_count

Column ordering::

    M N
    (for each column i) c_i  count_i  k_1 ... k_count

OR-Library ``scp*`` files are row ordered and the ``rail*`` files are column
ordered.
"""

from __future__ import annotations

import enum
import warnings
from pathlib import Path

import numpy as np

from .errors import (
    AmbiguousFormat,
    BadIndex,
    BadToken,
    FormatError,
    InstanceError,
    TrailingGarbage,
    Truncated,
    UnrecognizedFormat,
)
from .instance import build_instance

TOKENS_PER_LINE = 12


class FormatKind(enum.Enum):
    ROW = "row"
    COL = "col"


class _Tokens:
    def __init__(self, data):
        if isinstance(data, str):
            data = data.encode()
        self.toks = data.split()
        self.pos = 0

    def _take(self, count):
        if count < 0 or self.pos + count > len(self.toks):
            raise Truncated(
                f"needed {count} more token(s) at position {self.pos}, "
                f"only {len(self.toks) - self.pos} left"
            )
        start = self.pos
        self.pos += count
        return start, self.toks[start:self.pos]

    def _convert(self, count, conv, dtype):
        start, chunk = self._take(count)
        out = np.empty(len(chunk), dtype=dtype)
        for j, t in enumerate(chunk):
            try:
                out[j] = conv(t)
            except (ValueError, OverflowError):
                raise BadToken(start + j, t.decode("latin-1")) from None
        return out

    def ints(self, count):
        return self._convert(count, int, np.int64)

    def reals(self, count):
        return self._convert(count, float, np.float64)

    def int(self):
        return int(self.ints(1)[0])

    def real(self):
        return float(self.reals(1)[0])

    def finish(self):
        if self.pos != len(self.toks):
            raise TrailingGarbage(f"{len(self.toks) - self.pos} unread token(s) from position {self.pos}")


def _check_range(idx, hi, what):
    if idx.size and (idx.min() < 1 or idx.max() > hi):
        raise BadIndex(f"{what} index out of range [1, {hi}]")


def _header(tk):
    m, n = tk.int(), tk.int()
    if m < 1 or n < 1:
        raise BadIndex(f"header must give M >= 1 and N >= 1, got M={m}, N={n}")
    return m, n


def _parse_row(tk, name):
    m, n = _header(tk)
    costs = tk.reals(n)
    rows, cols = [], []
    for k in range(m):
        count = tk.int()
        idx = tk.ints(count)
        _check_range(idx, n, "column")
        rows.append(np.full(idx.size, k, dtype=np.int64))
        cols.append(idx - 1)
    tk.finish()
    entries = np.column_stack([np.concatenate(rows), np.concatenate(cols)])
    return build_instance(m, n, costs, entries, name=name)


def _parse_col(tk, name):
    m, n = _header(tk)
    if 2 * n > len(tk.toks) - tk.pos:
        raise Truncated(f"{n} columns need at least {2 * n} more tokens")
    costs = np.empty(n)
    rows, cols = [], []
    for i in range(n):
        costs[i] = tk.real()
        count = tk.int()
        idx = tk.ints(count)
        _check_range(idx, m, "row")
        rows.append(idx - 1)
        cols.append(np.full(idx.size, i, dtype=np.int64))
    tk.finish()
    entries = np.column_stack([np.concatenate(rows), np.concatenate(cols)])
    return build_instance(m, n, costs, entries, name=name)


def parse(data, kind, *, name=None):
    """Parse bytes (or str) in the given format into an :class:`ScpInstance`."""
    kind = FormatKind(kind)
    tk = _Tokens(data)
    if kind is FormatKind.ROW:
        return _parse_row(tk, name)
    return _parse_col(tk, name)


def detect_format(data):
    """Return the unique format that parses ``data`` cleanly.

    Row ordering wins when both parse; an :class:`AmbiguousFormat` warning is issued.
    """
    errors = {}
    for kind in (FormatKind.ROW, FormatKind.COL):
        try:
            parse(data, kind)
        except (FormatError, InstanceError) as exc:
            errors[kind] = exc
    if FormatKind.ROW not in errors:
        if FormatKind.COL not in errors:
            warnings.warn("input parses as both row and column ordering; using row",
                          AmbiguousFormat, stacklevel=2)
        return FormatKind.ROW
    if FormatKind.COL not in errors:
        return FormatKind.COL
    raise UnrecognizedFormat(errors[FormatKind.ROW], errors[FormatKind.COL])


def parse_auto(data, *, name=None):
    """Parse with format auto-detection; returns ``(instance, kind)``."""
    errors = {}
    parsed = {}
    for kind in (FormatKind.ROW, FormatKind.COL):
        try:
            parsed[kind] = parse(data, kind, name=name)
        except (FormatError, InstanceError) as exc:
            errors[kind] = exc
    if not parsed:
        raise UnrecognizedFormat(errors[FormatKind.ROW], errors[FormatKind.COL])
    if len(parsed) == 2:
        warnings.warn("input parses as both row and column ordering; using row",
                      AmbiguousFormat, stacklevel=2)
    kind = FormatKind.ROW if FormatKind.ROW in parsed else FormatKind.COL
    return parsed[kind], kind


def _fmt_cost(c):
    c = float(c)
    return str(int(c)) if c.is_integer() and abs(c) < 2**53 else repr(c)


def _wrap(tokens):
    lines = [" ".join(tokens[j:j + TOKENS_PER_LINE]) for j in range(0, len(tokens), TOKENS_PER_LINE)]
    return "\n".join(lines)


def emit(instance, kind):
    """Serialize an instance; at most ``TOKENS_PER_LINE`` tokens per line."""
    kind = FormatKind(kind)
    out = [f"{instance.n_rows} {instance.n_cols}"]
    if kind is FormatKind.ROW:
        out.append(_wrap([_fmt_cost(c) for c in instance.costs]))
        for k in range(instance.n_rows):
            r = instance.row(k)
            out.append(_wrap([str(r.size)] + [str(j + 1) for j in r]))
    else:
        for i in range(instance.n_cols):
            col = instance.col(i)
            out.append(_wrap([_fmt_cost(instance.costs[i]), str(col.size)] + [str(k + 1) for k in col]))
    return ("\n".join(out) + "\n").encode()


def read_instance(path, kind="auto"):
    """Read an instance file; ``kind`` is ``"row"``, ``"col"`` or ``"auto"``."""
    path = Path(path)
    data = path.read_bytes()
    name = path.stem
    if kind == "auto":
        return parse_auto(data, name=name)[0]
    return parse(data, kind, name=name)


def write_instance(instance, path, kind):
    Path(path).write_bytes(emit(instance, kind))
