"""Pure-Python kernels; same contract as the compiled ``_ckernels``.

All buffers are indexed by node.  A "view" is passed unpacked as
``(s, h, lam)``: edges out of ``s`` read ``h[j]`` (``s = -1`` disables the
override) and every length is shifted down by ``lam``.  Each kernel returns
the number of base-oracle evaluations it made.
"""
from __future__ import annotations

from .smawk import smawk_core


class Handle:
    __slots__ = ("N", "ev", "kind")

    def __init__(self, oracle):
        self.N = oracle.N
        self.ev = oracle._pyeval
        self.kind = oracle.kind


def make_handle(oracle) -> Handle:
    return Handle(oracle)


def row_minima(handle, s, h, lam, base, row_lo, row_hi, col_lo, col_hi,
               rightmost, out_val, out_arg, scratch):
    """Minimize ``base[i] + c(i, j) - lam`` over ``i in [col_lo : min(col_hi, j-1)]``
    for each row ``j in [row_lo : row_hi]``."""
    nrows = row_hi - row_lo + 1
    if nrows <= 0:
        return 0
    if col_lo > min(col_hi, row_lo - 1):
        raise ValueError(f"row {row_lo} has no feasible column")
    ev = handle.ev
    n = 0

    if base is None:
        def cell(i, j):
            nonlocal n
            if i == s:
                return h[j] - lam
            n += 1
            return ev(i, j) - lam
    else:
        def cell(i, j):
            nonlocal n
            if i == s:
                return base[i] + h[j] - lam
            n += 1
            return base[i] + ev(i, j) - lam

    def hi(j):
        return col_hi if col_hi < j else j - 1

    top = min(col_hi, row_hi - 1)
    smawk_core(cell, hi, row_lo, nrows, col_lo, top, rightmost,
               scratch, out_val, row_lo)
    if out_arg is not None:
        for q in range(nrows):
            out_arg[row_lo + q] = scratch[q]
    return n


def spt_values(handle, s, h, lam, F, aux, scratch, online=True):
    """Fill ``F[s..N]`` with shortest-path lengths from ``s``.

    ``online`` selects Wilber's linear-time scheme; otherwise a
    divide-and-conquer over SMAWK blocks (an extra log factor).  ``aux`` is
    node-indexed temporary space (the caller's parent buffer).
    """
    N = handle.N
    F[s] = lam * 0
    ovr = s if h is not None else -1
    if online:
        return _wilber(handle, s, ovr, h, lam, F, aux, scratch, N)
    n = row_minima(handle, ovr, h, lam, None, s + 1, N, s, s, False, F, None, scratch)
    return n + _dnc(handle, ovr, h, lam, F, aux, scratch, s, N)


def _wilber(handle, s, ovr, h, lam, F, aux, scratch, N):
    n = 0
    c = r = s
    while c < N:
        p = min(2 * c - r + 1, N)
        n += row_minima(handle, ovr, h, lam, F, c + 1, p, r, c, False, F, None, scratch)
        if p >= c + 2:
            n += row_minima(handle, ovr, h, lam, F, c + 2, p, c + 1, p - 1, False,
                            aux, None, scratch)
            j0 = -1
            for j in range(c + 2, p + 1):
                if aux[j] < F[j]:
                    j0 = j
                    break
            if j0 >= 0:
                F[j0] = aux[j0]
                r = c + 1
                c = j0
                continue
        c = p
    return n


def _dnc(handle, s, h, lam, F, aux, scratch, lo, hi):
    if hi <= lo:
        return 0
    mid = (lo + hi) // 2
    n = _dnc(handle, s, h, lam, F, aux, scratch, lo, mid)
    n += row_minima(handle, s, h, lam, F, mid + 1, hi, lo, mid, False, aux, None, scratch)
    for j in range(mid + 1, hi + 1):
        if aux[j] < F[j]:
            F[j] = aux[j]
    return n + _dnc(handle, s, h, lam, F, aux, scratch, mid + 1, hi)


def depth(parent, s, n):
    d = 0
    while n != s:
        n = parent[n]
        d += 1
    return d
