"""Minimal and maximal shortest-path trees of a shifted view.

Tree values ``F`` come from a row-minima based builder; the parent of each
node is then picked by one more SMAWK pass over ``F[i] + cost(i, j)``, with
the leftmost minimizer for the minimal tree and the rightmost for the
maximal one.  Depths in these trees are the fewest / most links over all
shortest paths.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from . import kernels
from .monge_core import ContractedView, LinkPath
from .workspace import DpWorkspace

STRATEGIES = ("online", "dnc")


class SptMode(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass
class SptResult:
    """Tree over ``[s:N]``.  ``F`` and ``parent`` alias workspace buffers and
    are overwritten by the next build on that workspace; use
    :meth:`snapshot` to keep them."""

    view: ContractedView
    mode: SptMode
    F: object
    parent: object
    evals: int = 0

    @property
    def s(self) -> int:
        return self.view.s

    @property
    def N(self) -> int:
        return self.view.N

    def snapshot(self) -> "SptResult":
        sc = self.view.base.scalar
        return SptResult(self.view, self.mode, [sc(x) for x in self.F],
                         [int(x) for x in self.parent], self.evals)


def build_spt(view: ContractedView, mode: SptMode, ws: DpWorkspace,
              strategy: str = "online") -> SptResult:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    s, N = view.s, view.N
    n = kernels.spt_values(ws, view, strategy == "online")
    n += kernels.row_minima(ws, view, ws.F, s + 1, N, s, N - 1, mode is SptMode.MAX,
                            None, ws.parent)
    ws.parent[s] = s
    return SptResult(view, mode, ws.F, ws.parent, n)


def depth_of(res: SptResult, n: int) -> int:
    if not res.s <= n <= res.N:
        raise ValueError(f"node {n} outside [{res.s}:{res.N}]")
    d = 0
    par = res.parent
    s = res.s
    while n != s:
        n = int(par[n])
        d += 1
    return d


def tree_path(res: SptResult, n: int) -> LinkPath:
    if not res.s < n <= res.N:
        raise ValueError(f"node {n} outside [{res.s + 1}:{res.N}]")
    nodes = [n]
    while n != res.s:
        n = int(res.parent[n])
        nodes.append(n)
    nodes.reverse()
    return LinkPath(tuple(nodes), res.view.base.scalar(res.F[nodes[-1]]))


def all_depths(res: SptResult) -> list[int]:
    """Depth of every node ``s..N`` (one forward sweep; tests only)."""
    s = res.s
    d = [0] * (res.N - s + 1)
    for j in range(s + 1, res.N + 1):
        d[j - s] = d[int(res.parent[j]) - s] + 1
    return d


def depth_at(view: ContractedView, lam, mode: SptMode, ws: DpWorkspace,
             strategy: str = "online", n: int | None = None) -> int:
    """Fewest (MIN) or most (MAX) links among shortest paths to ``n`` (default N)
    in ``view`` shifted by ``lam``."""
    res = build_spt(view.shifted(lam), mode, ws, strategy)
    return depth_of(res, view.N if n is None else n)
