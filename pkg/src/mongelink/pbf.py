"""Two consecutive layers of the link-constrained DP in linear space.

``pbf(view, m, n, ws)`` leaves ``ws.f[j]`` = best ``m``-link ``s``-``j``
length for ``j`` in ``[s+m:n]`` and ``ws.fbar[j]`` = best ``(m+1)``-link
length for ``j`` in ``[s+m+1:n]``.  Only the DP cells that can reach those
outputs are computed: layer ``k`` covers ``[s+k : n-m+k]``.
"""
from __future__ import annotations

from . import kernels
from .monge_core import ContractedView
from .workspace import DpWorkspace


def check_range(view: ContractedView, m: int, n: int) -> None:
    s = view.s
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if not s + m < n <= view.N:
        raise ValueError(f"need s+m < n <= N, got s={s}, m={m}, n={n}, N={view.N}")


def pbf(view: ContractedView, m: int, n: int, ws: DpWorkspace) -> int:
    """Fill ``ws.f`` / ``ws.fbar``; returns the base evaluations spent."""
    check_range(view, m, n)
    s = view.s
    spent = kernels.row_minima(ws, view, None, s + 1, n - m + 1, s, s, False, ws.f, None)
    for k in range(2, m + 1):
        spent += kernels.row_minima(ws, view, ws.f, s + k, n - m + k, s + k - 1,
                                    n - m + k - 1, False, ws.fbar, None)
        ws.swap_layers()
    spent += kernels.row_minima(ws, view, ws.f, s + m + 1, n, s + m, n - 1, False,
                                ws.fbar, None)
    ws.f_range = (s + m, n)
    ws.fbar_range = (s + m + 1, n)
    ws.pbf_key = (s, m, n, view.lam)
    return spent


def delta_at(ws: DpWorkspace, j: int):
    """Marginal value of one extra link at ``j`` from the current layers."""
    lo, hi = ws.fbar_range or (1, 0)
    if not lo <= j <= hi:
        raise IndexError(f"node {j} outside the valid layer range {ws.fbar_range}")
    return ws.fbar[j] - ws.f[j]


def layer_values(view: ContractedView, m: int, n: int, ws: DpWorkspace) -> tuple[list, list]:
    """Run ``pbf`` and copy out ``(f[s+m..n], fbar[s+m+1..n])`` (tests)."""
    pbf(view, m, n, ws)
    s = view.s
    sc = view.base.scalar
    return ([sc(ws.f[j]) for j in range(s + m, n + 1)],
            [sc(ws.fbar[j]) for j in range(s + m + 1, n + 1)])
