"""Row minima of implicitly defined totally monotone matrices (SMAWK).

Matrices here follow the DP orientation used throughout the package: rows
are destination nodes ``j`` and columns are predecessor nodes ``i``.  A row
may have a staircase bound on its columns; cells right of the bound are
treated as ``+inf`` sentinels that lose to every finite cell and, among
themselves, favour the smaller column.  That padding keeps the matrix
totally monotone, so the textbook reduce/interpolate recursion runs
unchanged.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable, Sequence, Union


class TieRule(enum.Enum):
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


ColBound = Union[int, Callable[[int], int]]


@dataclass
class ImplicitMatrix:
    """Rows ``[row_lo:row_hi]``; row ``j`` has feasible columns
    ``[col_lo : col_hi(j)]`` (``col_hi`` an int or a non-decreasing callable).
    ``eval(row, col)`` is only called on feasible cells."""

    row_lo: int
    row_hi: int
    col_lo: int
    col_hi: ColBound
    eval: Callable[[int, int], Any]

    def hi(self, row: int) -> int:
        if callable(self.col_hi):
            return self.col_hi(row)
        return self.col_hi


def smawk_core(
    cell: Callable[[int, int], Any],
    hi: Callable[[int], int],
    row0: int,
    nrows: int,
    col_lo: int,
    col_hi: int,
    rightmost: bool,
    arg: list,
    val: Any,
    val_off: int = 0,
) -> None:
    """Row minima for rows ``row0 .. row0+nrows-1``.

    ``cell(i, j)`` is the entry in row ``j``, column ``i``.  The argmin of
    row ``row0+q`` lands in ``arg[q]`` and its value in ``val[val_off+q]``
    (``val`` may be None).  Recursion depth is ``O(log nrows)``.
    """
    _level(cell, hi, row0, nrows, 1, 0, range(col_lo, col_hi + 1),
           rightmost, arg, val, val_off)


def _level(cell, hi, row0, nrows, step, off, cols, rightmost, arg, val, val_off):
    # rows of this level: row0 + k*step + off, k = 0 .. nrows-1
    stack: list[int] = []
    for c in cols:
        while stack:
            t = len(stack) - 1
            j = row0 + t * step + off
            if c > hi(j):
                break
            a = cell(stack[-1], j)
            b = cell(c, j)
            if b < a or (rightmost and b == a):
                stack.pop()
            else:
                break
        if len(stack) < nrows:
            stack.append(c)

    if nrows >= 2:
        _level(cell, hi, row0, nrows // 2, 2 * step, off + step, stack,
               rightmost, arg, val, val_off)

    p = 0
    last = len(stack) - 1
    for k in range(0, nrows, 2):
        q = k * step + off
        j = row0 + q
        stop = arg[q + step] if k + 1 < nrows else stack[last]
        hj = hi(j)
        best = stack[p]
        bv = cell(best, j)
        while stack[p] != stop:
            p += 1
            c = stack[p]
            if c <= hj:
                v = cell(c, j)
                if v < bv or (rightmost and v == bv):
                    best, bv = c, v
        arg[q] = best
        if val is not None:
            val[val_off + q] = bv


def row_minima(m: ImplicitMatrix, tie: TieRule = TieRule.LEFTMOST) -> list[tuple[int, Any]]:
    """Return ``[(argmin_col, min_value), ...]`` for rows ``row_lo..row_hi``.

    Minimizer columns are non-decreasing in the row index under either tie
    rule.  Raises ValueError on an empty row range or a row without a
    feasible column.
    """
    if m.row_hi < m.row_lo:
        raise ValueError("empty row range")
    nrows = m.row_hi - m.row_lo + 1
    col_hi = m.col_lo - 1
    for j in range(m.row_lo, m.row_hi + 1):
        h = m.hi(j)
        if h < m.col_lo:
            raise ValueError(f"row {j} has no feasible column")
        col_hi = max(col_hi, h)
    arg = [0] * nrows
    val: list = [None] * nrows
    ev = m.eval
    smawk_core(lambda i, j: ev(j, i), m.hi, m.row_lo, nrows, m.col_lo, col_hi,
               tie is TieRule.RIGHTMOST, arg, val)
    return list(zip(arg, val))


def naive_row_minima(m: ImplicitMatrix, tie: TieRule = TieRule.LEFTMOST) -> list[tuple[int, Any]]:
    """Full scan of every row; the reference for :func:`row_minima`."""
    out = []
    for j in range(m.row_lo, m.row_hi + 1):
        best, bv = None, None
        for i in range(m.col_lo, m.hi(j) + 1):
            v = m.eval(j, i)
            if best is None or v < bv or (tie is TieRule.RIGHTMOST and v == bv):
                best, bv = i, v
        out.append((best, bv))
    return out


def matrix_from_rows(rows: Sequence[Sequence[Any]]) -> ImplicitMatrix:
    """Dense matrix ``rows[r][c]`` as an ImplicitMatrix (no staircase)."""
    return ImplicitMatrix(0, len(rows) - 1, 0, len(rows[0]) - 1,
                          lambda r, c: rows[r][c])
