"""Lagrangian windows, path swapping and path extraction.

Shifting every edge down by ``lam`` makes a shortest ``m``-link path cost
``f(m, n) - m*lam``.  For a fixed target ``n`` the set of link counts
attained by shortest paths of the shifted graph is an interval
``[d_min, d_max]``, and ``m`` lies in it exactly when
``delta(m-1, n) <= lam <= delta(m, n)`` with ``delta(m, n) =
f(m+1, n) - f(m, n)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .monge_core import (NEG_INF, POS_INF, ContractedView, CostOracle, ExtendedCost,
                         LinkPath)
from .spt import SptMode, build_spt, depth_of
from .workspace import DpWorkspace


class WindowError(ValueError):
    """``lam`` does not admit a shortest path with the requested link count."""

    def __init__(self, lam, M, d_min, d_max):
        super().__init__(f"lambda={lam} gives link counts [{d_min}:{d_max}], "
                         f"which excludes M={M}")
        self.lam = lam
        self.M = M
        self.d_min = d_min
        self.d_max = d_max


def _ext(x) -> ExtendedCost:
    return x if isinstance(x, ExtendedCost) else ExtendedCost.finite(x)


@dataclass(frozen=True)
class DeltaWindow:
    """Closed window ``[lo, hi]``; infinite endpoints are excluded."""

    lo: ExtendedCost
    hi: ExtendedCost

    def __post_init__(self):
        object.__setattr__(self, "lo", _ext(self.lo))
        object.__setattr__(self, "hi", _ext(self.hi))

    def __contains__(self, lam) -> bool:
        return self.lo <= lam <= self.hi

    @classmethod
    def from_layers(cls, f: Sequence, m: int) -> "DeltaWindow":
        """Window of link count ``m`` from ``f[k]`` = best ``k``-link length,
        ``k = 1..K`` (``f[0]`` ignored)."""
        K = len(f) - 1
        lo = NEG_INF if m == 1 else ExtendedCost.finite(f[m] - f[m - 1])
        hi = POS_INF if m == K else ExtendedCost.finite(f[m + 1] - f[m])
        return cls(lo, hi)


class Position(enum.Enum):
    BELOW = "below"    # lam < delta(M-1, N): shortest paths use fewer than M links
    INSIDE = "inside"
    ABOVE = "above"    # lam > delta(M, N): shortest paths use more than M links


@dataclass(frozen=True)
class Classification:
    position: Position
    d_min: int
    d_max: Optional[int]

    @property
    def inside(self) -> bool:
        return self.position is Position.INSIDE


def classify(view: ContractedView, lam, M: int, ws: DpWorkspace,
             strategy: str = "online") -> Classification:
    """Locate ``lam`` against the window of ``M`` links to ``view.N``.

    ``d_max`` is only computed when ``d_min <= M``.
    """
    if not 1 <= M <= view.N - view.s:
        raise ValueError(f"M={M} outside [1:{view.N - view.s}]")
    shifted = view.shifted(lam)
    d_min = depth_of(build_spt(shifted, SptMode.MIN, ws, strategy), view.N)
    if d_min > M:
        return Classification(Position.ABOVE, d_min, None)
    d_max = depth_of(build_spt(shifted, SptMode.MAX, ws, strategy), view.N)
    pos = Position.INSIDE if d_max >= M else Position.BELOW
    return Classification(pos, d_min, d_max)


def _swap_index(u: Sequence[int], v: Sequence[int], m: int) -> int:
    m1, m2 = len(u) - 1, len(v) - 1
    if not 1 <= m1 <= m2:
        raise ValueError(f"need 1 <= links(P)={m1} <= links(Q)={m2}")
    if not u[0] <= v[0] < v[m2] <= u[m1]:
        raise ValueError("endpoints must nest: u0 <= v0 < v_end <= u_end")
    if not m1 <= m <= m2:
        raise ValueError(f"m={m} outside [{m1}:{m2}]")
    for k in range(1, m1 + 1):
        if u[k] >= v[m - m1 + k]:
            return k
    raise AssertionError("no crossing index; endpoint check should have caught this")


def _nodes(p) -> tuple:
    return p.nodes if isinstance(p, LinkPath) else tuple(p)


def swap_plus(Q, P, m: int) -> LinkPath:
    """``m``-link path from Q's start to P's end (prefix of Q, suffix of P)."""
    u, v = _nodes(P), _nodes(Q)
    k = _swap_index(u, v, m)
    j = m - (len(u) - 1) + k
    return LinkPath(v[:j] + u[k:])


def swap_minus(Q, P, m: int) -> LinkPath:
    """The complementary path from P's start to Q's end."""
    u, v = _nodes(P), _nodes(Q)
    k = _swap_index(u, v, m)
    j = m - (len(u) - 1) + k
    return LinkPath(u[:k] + v[j:])


def _store_path(res, buf) -> int:
    """Write the tree path ``s..N`` into ``buf[0..d]``; returns the depth."""
    d = depth_of(res, res.N)
    n = res.N
    for t in range(d, -1, -1):
        buf[t] = n
        n = int(res.parent[n])
    return d


def _nudges(lam, scale):
    step = max(abs(lam), abs(scale), 1.0) * 4 * 2.220446049250313e-16
    for _ in range(48):
        yield step
        step *= 2


def extract_path(base: CostOracle, lam, M: int, ws: Optional[DpWorkspace] = None,
                 strategy: str = "online", backend: Optional[str] = None) -> LinkPath:
    """A shortest ``M``-link ``1``-``N`` path, given ``lam`` in its window.

    Both tree paths are parked in the workspace's ``f``/``fbar`` buffers so
    the extraction uses no extra linear storage.  In float mode a ``lam``
    that misses its window by rounding is nudged inward before giving up.
    """
    N = base.N
    if not 1 <= M <= N - 1:
        raise ValueError(f"M={M} outside [1:{N - 1}]")
    if ws is None:
        ws = DpWorkspace.for_oracle(base, backend)
    view = ContractedView(base, 1)
    res = build_spt(view.shifted(lam), SptMode.MIN, ws, strategy)
    m1 = _store_path(res, ws.f)
    if m1 > M and base.mode == "float":
        for step in _nudges(lam, res.F[N]):
            res = build_spt(view.shifted(lam - step), SptMode.MIN, ws, strategy)
            m1 = _store_path(res, ws.f)
            if m1 <= M:
                lam = lam - step
                break
    res = build_spt(view.shifted(lam), SptMode.MAX, ws, strategy)
    m2 = _store_path(res, ws.fbar)
    if m2 < M and m1 <= M and base.mode == "float":
        for step in _nudges(lam, res.F[N]):
            res = build_spt(view.shifted(lam + step), SptMode.MAX, ws, strategy)
            m2 = _store_path(res, ws.fbar)
            if m2 >= M:
                lam = lam + step
                res = build_spt(view.shifted(lam), SptMode.MIN, ws, strategy)
                m1 = _store_path(res, ws.f)
                break
    if not m1 <= M <= m2:
        raise WindowError(lam, M, m1, m2)
    u, v = ws.f, ws.fbar
    k = 1
    while u[k] < v[M - m1 + k]:
        k += 1
    j = M - m1 + k
    nodes = tuple(int(v[t]) for t in range(j)) + tuple(int(u[t]) for t in range(k, m1 + 1))
    return LinkPath(nodes).with_length(base.peek)

