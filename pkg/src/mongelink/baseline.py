"""Reference solvers: the layer-by-layer DP with parents, and brute force.

Neither is bound by the linear-space budget.  ``dp_full`` keeps one parent
row per layer (``M * (N+1)`` cells, recorded on the accountant when one is
given); ``brute_force`` enumerates every path and is limited to tiny graphs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import kernels
from .monge_core import NEG_INF, POS_INF, ContractedView, CostOracle, ExtendedCost, LinkPath
from .parametric import DeltaWindow
from .workspace import CellAccountant, DpWorkspace

BRUTE_MAX_N = 14


@dataclass
class DpResult:
    length: object
    path: LinkPath
    evals: int
    rows: Optional[dict] = None     # m -> {n: f(m, n)} when full=True


def dp_full(o: CostOracle, M: int, full: bool = False, backend: Optional[str] = None,
            accountant: Optional[CellAccountant] = None) -> DpResult:
    """Shortest ``M``-link ``1``-``N`` path by the textbook DP.

    Layer ``k`` is computed for every ``n`` in ``[k+1:N]`` so the work is
    ``Theta(N*M)``.  With ``full=True`` every layer row is also returned.
    """
    N = o.N
    if not 1 <= M <= N - 1:
        raise ValueError(f"M={M} outside [1:{N - 1}]")
    acc = accountant if accountant is not None else CellAccountant()
    ws = DpWorkspace.for_oracle(o, backend, acc)
    label = f"dp-parents{id(ws)}"
    acc.alloc(label, M * (N + 1))
    try:
        if ws.backend == "compiled":
            par = np.zeros((M + 1, N + 1), dtype=np.int64)
        else:
            par = [[0] * (N + 1) for _ in range(M + 1)]
        view = ContractedView(o, 1)
        start = o.evals
        rows = {} if full else None
        kernels.row_minima(ws, view, None, 2, N, 1, 1, False, ws.f, None)
        for j in range(2, N + 1):
            par[1][j] = 1
        if full:
            rows[1] = {j: o.scalar(ws.f[j]) for j in range(2, N + 1)}
        for k in range(2, M + 1):
            kernels.row_minima(ws, view, ws.f, k + 1, N, k, N - 1, False, ws.fbar, par[k])
            ws.swap_layers()
            if full:
                rows[k] = {j: o.scalar(ws.f[j]) for j in range(k + 1, N + 1)}
        nodes = [N]
        for k in range(M, 0, -1):
            nodes.append(int(par[k][nodes[-1]]))
        nodes.reverse()
        length = o.scalar(ws.f[N])
        return DpResult(length, LinkPath(tuple(nodes), length), o.evals - start, rows)
    finally:
        acc.free(label)
        ws.release()


@dataclass
class BruteResult:
    """Exhaustive ground truth on the graph rooted at ``s``.

    ``f[(m, n)]`` is the best ``m``-link ``s``-``n`` length and
    ``paths[(m, n)]`` all paths attaining it.
    """

    s: int
    N: int
    f: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)

    def row(self, n: int) -> list:
        """``[None, f(1, n), ..., f(n-s, n)]``."""
        return [None] + [self.f[(m, n)] for m in range(1, n - self.s + 1)]

    def delta(self, m: int, n: int) -> ExtendedCost:
        if m == 0:
            return NEG_INF
        if m == n - self.s:
            return POS_INF
        return ExtendedCost.finite(self.f[(m + 1, n)] - self.f[(m, n)])

    def window(self, m: int, n: int) -> DeltaWindow:
        return DeltaWindow(self.delta(m - 1, n), self.delta(m, n))

    def link_counts(self, lam, n: int) -> list[int]:
        """All ``m`` minimizing ``f(m, n) - m*lam``."""
        vals = {m: self.f[(m, n)] - m * lam for m in range(1, n - self.s + 1)}
        best = min(vals.values())
        return [m for m, v in vals.items() if v == best]

    def d_min(self, lam, n: int) -> int:
        return 0 if n == self.s else min(self.link_counts(lam, n))

    def d_max(self, lam, n: int) -> int:
        return 0 if n == self.s else max(self.link_counts(lam, n))

    def optimum(self, M: int, n: Optional[int] = None):
        return self.f[(M, self.N if n is None else n)]

    def optimal_paths(self, M: int, n: Optional[int] = None) -> list[tuple]:
        return self.paths[(M, self.N if n is None else n)]

    def deltas(self, n: Optional[int] = None) -> list:
        """Finite ``delta(m, n)`` values for ``m`` in ``[1 : n-s-1]``."""
        n = self.N if n is None else n
        return [self.f[(m + 1, n)] - self.f[(m, n)] for m in range(1, n - self.s)]


def brute_force(o: Union[CostOracle, ContractedView]) -> BruteResult:
    """Enumerate every path from the root to every node (``N <= 14``)."""
    view = o if isinstance(o, ContractedView) else ContractedView(o, 1)
    s, N = view.s, view.N
    if N > BRUTE_MAX_N:
        raise ValueError(f"brute force is limited to N <= {BRUTE_MAX_N}, got {N}")
    cost = {(i, j): view.peek(i, j) for i in range(s, N) for j in range(i + 1, N + 1)}
    out = BruteResult(s, N)
    for n in range(s + 1, N + 1):
        inner = range(s + 1, n)
        for r in range(0, n - s):
            for mid in itertools.combinations(inner, r):
                p = (s,) + mid + (n,)
                length = sum(cost[a, b] for a, b in zip(p, p[1:]))
                key = (r + 1, n)
                cur = out.f.get(key)
                if cur is None or length < cur:
                    out.f[key] = length
                    out.paths[key] = [p]
                elif length == cur:
                    out.paths[key].append(p)
    return out
