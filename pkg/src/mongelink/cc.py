"""Shortest M-link paths: degenerate cases, staged multiplier search, extraction.

``find_lambda`` returns a multiplier whose window contains ``M``.  Small
instances (``M*(N-M) <= 4*N*log2(N-M)``) get it from a single two-layer DP.
Otherwise the budget ``M`` is split evenly into ``K`` stages; each of the
first ``K-1`` stages probes and either hits or folds the graph, and the
last stage runs the two-layer DP on whatever graph remains.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

from .monge_core import ContractedView, CostOracle, LinkPath
from .parametric import extract_path
from .pbf import pbf
from .probe import Contracted, Hit, ProbeError, SolverState, probe
from .workspace import CellAccountant, DpWorkspace


def gate(N: int, M: int) -> bool:
    """True when one two-layer DP is already within the target bound."""
    return M * (N - M) <= 4 * N * math.log2(N - M)


@dataclass(frozen=True)
class StagePlan:
    """Even split of ``M`` into ``K`` stage budgets: the first
    ``K' = K - M mod K`` get ``floor(M/K)``, the rest ``ceil(M/K)``."""

    N: int
    M: int
    K: int

    @classmethod
    def for_problem(cls, N: int, M: int) -> "StagePlan":
        K = math.ceil(math.sqrt(M * (N - M) / (N * math.log2(N - M))))
        return cls(N, M, K)

    @property
    def K_small(self) -> int:
        return self.K - self.M % self.K

    def m(self, k: int) -> int:
        if not 1 <= k <= self.K:
            raise IndexError(f"stage {k} outside [1:{self.K}]")
        q = self.M // self.K
        return q if k <= self.K_small else q + (self.M % self.K > 0)

    def budgets(self) -> list[int]:
        return [self.m(k) for k in range(1, self.K + 1)]

    def check(self) -> None:
        N, M, K = self.N, self.M, self.K
        if not 16 < M < N - 16:
            raise ProbeError(f"staged branch with M={M}, N={N} outside (16 : N-16)")
        if not 2 < K < math.sqrt(M):
            raise ProbeError(f"stage count K={K} outside (2 : sqrt(M))")
        if min(self.budgets()) < 4:
            raise ProbeError(f"stage budget below 4: {self.budgets()}")


@dataclass
class SolveStats:
    algo: str = "cc"
    branch: str = ""
    base_evals: int = 0
    peak_cells: int = 0
    wall_ns: int = 0
    K: int = 0
    stages: int = 0
    hits: int = 0
    lam: object = None
    trace: list = field(default_factory=list)


@dataclass
class SolveResult:
    path: LinkPath
    stats: SolveStats

    @property
    def length(self):
        return self.path.length


def find_lambda(o: CostOracle, M: int, ws: Optional[DpWorkspace] = None,
                strategy: str = "online", check: str = "current", debug: bool = False,
                stats: Optional[SolveStats] = None):
    """A multiplier whose window of ``M`` links to ``N`` is non-empty at it."""
    N = o.N
    if not 2 <= M <= N - 2:
        raise ValueError(f"need 2 <= M <= N-2, got M={M}, N={N}")
    if ws is None:
        ws = DpWorkspace.for_oracle(o)
    st = stats if stats is not None else SolveStats()
    if gate(N, M):
        st.branch = "gate"
        pbf(ContractedView(o, 1), M, N, ws)
        return ws.fbar[N] - ws.f[N]

    plan = StagePlan.for_problem(N, M)
    plan.check()
    st.branch = "staged"
    st.K = plan.K
    state = SolverState.initial(o, M, ws, strategy=strategy, check=check, debug=debug,
                                trace=st.trace)
    for k in range(1, plan.K):
        st.stages = k
        out = probe(state, plan.m(k))
        if isinstance(out, Hit):
            st.hits += 1
            return out.lam
        assert isinstance(out, Contracted)
    st.stages = plan.K
    if state.M != plan.m(plan.K):
        raise ProbeError(f"final budget {state.M} != planned {plan.m(plan.K)}")
    pbf(state.view, state.M, N, ws)
    st.trace.append(("final", state.s, state.M))
    return ws.fbar[N] - ws.f[N]


def _full_path(o: CostOracle) -> LinkPath:
    return LinkPath(tuple(range(1, o.N + 1))).with_length(o)


def _drop_one(o: CostOracle) -> LinkPath:
    # best path skipping exactly one internal node k: saves
    # c(k-1,k) + c(k,k+1) - c(k-1,k+1)
    N = o.N
    total = 0
    best_k, best_gain = None, None
    prev = o(1, 2)
    total += prev
    for k in range(2, N):
        nxt = o(k, k + 1)
        total += nxt
        gain = prev + nxt - o(k - 1, k + 1)
        if best_gain is None or gain > best_gain:
            best_k, best_gain = k, gain
        prev = nxt
    nodes = tuple(v for v in range(1, N + 1) if v != best_k)
    return LinkPath(nodes, total - best_gain)


def _midpoint(o: CostOracle) -> LinkPath:
    N = o.N
    best_k, best = None, None
    for k in range(2, N):
        v = o(1, k) + o(k, N)
        if best is None or v < best:
            best_k, best = k, v
    return LinkPath((1, best_k, N), best)


def solve(o: CostOracle, M: int, strategy: str = "online", check: str = "current",
          debug: bool = False, backend: Optional[str] = None,
          accountant: Optional[CellAccountant] = None) -> SolveResult:
    """Shortest ``M``-link path from 1 to N with run statistics."""
    N = o.N
    if not 1 <= M <= N - 1:
        raise ValueError(f"M={M} outside [1:{N - 1}]")
    acc = accountant if accountant is not None else CellAccountant()
    st = SolveStats()
    start_evals = o.evals
    t0 = time.perf_counter_ns()
    if M == N - 1:
        st.branch = "full"
        path = _full_path(o)
    elif M == 1:
        st.branch = "edge"
        path = LinkPath((1, N), o(1, N))
    elif M == N - 2:
        st.branch = "drop-one"
        path = _drop_one(o)
    elif M == 2:
        st.branch = "midpoint"
        path = _midpoint(o)
    else:
        ws = DpWorkspace.for_oracle(o, backend, acc)
        try:
            lam = find_lambda(o, M, ws, strategy, check, debug, st)
            st.lam = o.scalar(lam)
            path = extract_path(o, lam, M, ws, strategy)
        finally:
            ws.release()
    st.wall_ns = time.perf_counter_ns() - t0
    st.base_evals = o.evals - start_evals
    st.peak_cells = acc.peak
    return SolveResult(path, st)


def shortest_m_link_path(o: CostOracle, M: int, **kw) -> LinkPath:
    return solve(o, M, **kw).path
