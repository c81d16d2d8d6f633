"""Hit-or-contract step of the staged search for a Lagrange multiplier.

A probe with ``m`` links samples ``lam = delta(m, n)`` for target nodes
``n`` and compares the fewest-link count of the shifted graph against the
remaining budget ``M``.  Either some sample already lies in the window of
``M`` links (a hit), or the least ``n`` whose sample does not overshoot is
found as the pivot ``r``.  The nodes before ``r - 1`` are then folded into a
new root ``r - 1`` whose out-edges carry the best ``(m+1)``-link prefix
lengths, and the budget drops by ``m``.  Folding keeps the graph Monge and
leaves the window of the remaining budget unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from . import kernels
from .monge_core import ContractedView, CostOracle, verify_submodular, sample_submodular
from .pbf import pbf
from .spt import SptMode, depth_at
from .workspace import DpWorkspace

CHECK_MODES = ("current", "original", "both")


class ProbeError(AssertionError):
    """An internal invariant of the probe failed."""


@dataclass
class SolverState:
    """Current contracted view, remaining link budget and shared buffers.

    ``M_total`` is the budget of the original problem; the difference to
    ``M`` is the number of links already folded into the root.
    """

    view: ContractedView
    M: int
    ws: DpWorkspace
    M_total: Optional[int] = None
    strategy: str = "online"
    check: str = "current"
    debug: bool = False
    trace: list = field(default_factory=list)

    def __post_init__(self):
        if self.M_total is None:
            self.M_total = self.M
        if self.check not in CHECK_MODES:
            raise ValueError(f"check must be one of {CHECK_MODES}")

    @classmethod
    def initial(cls, o: CostOracle, M: int, ws: DpWorkspace, **kw) -> "SolverState":
        return cls(ContractedView(o, 1), M, ws, **kw)

    @property
    def N(self) -> int:
        return self.view.N

    @property
    def s(self) -> int:
        return self.view.s


@dataclass(frozen=True)
class Hit:
    lam: object
    n: int
    phase: str


@dataclass(frozen=True)
class Contracted:
    r: int
    m: int


ProbeOutcome = Union[Hit, Contracted]


def _cmp(a: int, b: int) -> int:
    return (a > b) - (a < b)


def _side(state: SolverState, lam, mode: SptMode) -> int:
    """Sign of (link count) - (budget) for the chosen extreme tree."""
    ws = state.ws
    out = None
    if state.check in ("current", "both"):
        out = _cmp(depth_at(state.view, lam, mode, ws, state.strategy), state.M)
    if state.check in ("original", "both"):
        root = ContractedView(state.view.base, 1)
        alt = _cmp(depth_at(root, lam, mode, ws, state.strategy), state.M_total)
        if out is not None and alt != out:
            raise ProbeError(f"current view and original graph disagree at lam={lam}: {out} vs {alt}")
        out = alt
    return out


def check_preconditions(state: SolverState, m: int) -> None:
    M, s, N = state.M, state.s, state.N
    if not 4 <= M <= N - s - 1:
        raise ValueError(f"probe needs 4 <= M <= N-s-1, got M={M}, s={s}, N={N}")
    if not 2 <= m <= M - 2:
        raise ValueError(f"probe needs 2 <= m <= M-2, got m={m}, M={M}")


def probe(state: SolverState, m: int) -> ProbeOutcome:
    check_preconditions(state, m)
    view, ws, M, N, s = state.view, state.ws, state.M, state.N, state.s
    trace = state.trace

    lo, hi, step = s + m, N - M + m, 1
    while True:
        n = min(lo + step, hi)
        pbf(view, m, n, ws)
        lam = ws.fbar[n] - ws.f[n]
        side = _side(state, lam, SptMode.MIN)
        trace.append(("exp", n, lam, side))
        if side == 0:
            return Hit(lam, n, "exp")
        if side < 0:
            break
        if n == hi:
            raise ProbeError(f"exponential search overshot at every n up to {hi}")
        lo, step = n, 2 * step
    hi = n
    if state.debug:
        _check_inherited(state, m, hi)

    while hi - lo > 1:
        n = (lo + hi + 1) // 2
        lam = ws.fbar[n] - ws.f[n]
        side = _side(state, lam, SptMode.MIN)
        trace.append(("bin", n, lam, side))
        if side == 0:
            return Hit(lam, n, "bin")
        if side > 0:
            lo = n
        else:
            hi = n

    r = hi
    lam = ws.fbar[r] - ws.f[r]
    side = _side(state, lam, SptMode.MAX)
    trace.append(("pivot", r, lam, side))
    if side >= 0:
        return Hit(lam, r, "pivot")

    # fold [s : r-2] into the new root r-1; columns start at s+m > s, so the
    # kernel never reads the old h while overwriting it
    kernels.row_minima(ws, view, ws.f, r, N, s + m, r - 1, False, ws.h, None)
    state.view = ContractedView(view.base, r - 1, ws.h)
    state.M = M - m
    ws.invalidate()
    trace.append(("contract", r, m, state.M))
    if state.debug:
        _check_monge(state)
    return Contracted(r, m)


def _check_inherited(state: SolverState, m: int, hi: int) -> None:
    ws = state.ws
    fresh = DpWorkspace(state.N, ws.mode, ws.backend)
    try:
        pbf(state.view, m, hi, fresh)
        s = state.s
        for j in range(s + m, hi + 1):
            if fresh.f[j] != ws.f[j] or (j > s + m and fresh.fbar[j] != ws.fbar[j]):
                raise ProbeError(f"inherited layers differ from a fresh run at node {j}")
    finally:
        fresh.release()


def _check_monge(state: SolverState) -> None:
    view = state.view.frozen()
    size = view.N - view.s + 1
    if size <= 24:
        ok, quad = verify_submodular(view)
    elif size <= 400:
        ok, quad = verify_submodular(view, "adjacent")
    else:
        ok, quad = sample_submodular(view, samples=500)
    if not ok:
        raise ProbeError(f"contracted view is not Monge: {quad}")
