"""Cost oracles, contracted views, paths and instance generators.

Nodes are numbered ``1..N`` and an oracle answers ``c(i, j)`` for
``1 <= i < j <= N``.  Oracles come in a few structured kinds so that the
compiled kernels can evaluate them without calling back into Python:

``gap``       c(i, j) = g[j-i] + a[i] + b[j]
``dense``     explicit (N+1) x (N+1) table
``sse``       sum of squared errors of ``data[i-1 : j-1]`` around its mean
``callable``  any Python function (pure-Python kernels only)
"""
from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

Number = Union[int, float]

MODES = ("int", "float")


# ----------------------------------------------------------------------------
# extended costs


@functools.total_ordering
class ExtendedCost:
    """A cost value with explicit -inf/+inf sentinels.

    Sentinels only take part in comparisons; adding them is an error.
    """

    __slots__ = ("tag", "value")

    NEG = -1
    FIN = 0
    POS = 1

    def __init__(self, tag: int, value: Number = 0):
        self.tag = tag
        self.value = value if tag == self.FIN else 0

    @classmethod
    def finite(cls, value: Number) -> "ExtendedCost":
        return cls(cls.FIN, value)

    @property
    def is_finite(self) -> bool:
        return self.tag == self.FIN

    def _key(self):
        return (self.tag, self.value)

    @staticmethod
    def _coerce(other) -> "ExtendedCost":
        if isinstance(other, ExtendedCost):
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return ExtendedCost.finite(other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.tag == self.NEG:
            return "-inf"
        if self.tag == self.POS:
            return "+inf"
        return repr(self.value)


NEG_INF = ExtendedCost(ExtendedCost.NEG)
POS_INF = ExtendedCost(ExtendedCost.POS)


# ----------------------------------------------------------------------------
# oracles


class CostOracle:
    """Edge lengths of a complete DAG on ``1..N`` with an evaluation counter.

    The counter is a plain integer and is not thread-safe; share an oracle
    across threads only for read-only use of the parameters.
    """

    def __init__(self, N: int, kind: str, params: dict, mode: str = "int",
                 fn: Optional[Callable[[int, int], Number]] = None, name: str = ""):
        if N < 2:
            raise ValueError("need N >= 2")
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.N = N
        self.kind = kind
        self.params = params
        self.mode = mode
        self.name = name or kind
        self.evals = 0
        self._fn = fn
        self._handles: dict = {}
        self._pyeval = self._build_pyeval()

    @property
    def dtype(self):
        return np.int64 if self.mode == "int" else np.float64

    @property
    def scalar(self):
        return int if self.mode == "int" else float

    def _build_pyeval(self) -> Callable[[int, int], Number]:
        conv = self.scalar
        if self.kind == "gap":
            g = [conv(x) for x in self.params["g"]]
            a = [conv(x) for x in self.params["a"]]
            b = [conv(x) for x in self.params["b"]]
            return lambda i, j: g[j - i] + a[i] + b[j]
        if self.kind == "dense":
            rows = [[conv(x) for x in row] for row in self.params["c"]]
            return lambda i, j: rows[i][j]
        if self.kind == "sse":
            s1 = [float(x) for x in self.params["s1"]]
            s2 = [float(x) for x in self.params["s2"]]

            def sse(i, j):
                t = s1[j - 1] - s1[i - 1]
                v = (s2[j - 1] - s2[i - 1]) - t * t / (j - i)
                return v if v > 0.0 else 0.0
            return sse
        if self.kind == "callable":
            fn = self._fn
            return lambda i, j: conv(fn(i, j))
        raise ValueError(f"unknown oracle kind {self.kind!r}")

    def __call__(self, i: int, j: int) -> Number:
        self.evals += 1
        return self._pyeval(i, j)

    eval = __call__

    def peek(self, i: int, j: int) -> Number:
        """Evaluate without touching the counter (tests and reporting)."""
        return self._pyeval(i, j)

    def reset_counter(self) -> None:
        self.evals = 0

    def as_float(self) -> "CostOracle":
        """Same instance in float mode."""
        return CostOracle(self.N, self.kind, self.params, "float", self._fn, self.name)

    def __repr__(self):
        return f"CostOracle({self.name}, N={self.N}, mode={self.mode})"


def gen_convex_gap(N: int, g: Union[Callable[[int], Number], Sequence[Number]],
                   mode: str = "int", name: str = "convex-gap") -> CostOracle:
    """Oracle with ``c(i, j) = g(j - i)`` for a convex gap function ``g``."""
    gv = [0] * N
    for d in range(1, N):
        gv[d] = g(d) if callable(g) else g[d]
    for d in range(2, N - 1):
        if gv[d + 1] - 2 * gv[d] + gv[d - 1] < 0:
            raise ValueError(f"gap function is not convex at d={d}")
    zeros = [0] * (N + 1)
    return CostOracle(N, "gap", {"g": gv + [0], "a": zeros, "b": zeros}, mode, name=name)


def convex_sq(N: int, mode: str = "int") -> CostOracle:
    return gen_convex_gap(N, lambda d: d * d, mode, name="convex-sq")


def linear(N: int, mode: str = "int") -> CostOracle:
    return gen_convex_gap(N, lambda d: d, mode, name="linear")


def gen_random_monge(N: int, seed: int, mode: str = "int") -> CostOracle:
    """Random Monge instance ``g(j-i) + a_i + b_j`` with convex ``g``.

    The separable terms cancel in the quadrangle inequality, so only the
    convexity of ``g`` matters.  Values are integers; small ranges keep ties
    common on small instances.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    rng = np.random.default_rng(seed)
    d2 = rng.integers(0, 4, size=N + 1)
    g = [0] * (N + 1)
    g[1] = int(rng.integers(-5, 6))
    slope = int(rng.integers(-2 * N, 2 * N + 1))
    for d in range(2, N + 1):
        slope += int(d2[d])
        g[d] = g[d - 1] + slope
    a = [int(x) for x in rng.integers(0, 3 * N + 1, size=N + 1)]
    b = [int(x) for x in rng.integers(0, 3 * N + 1, size=N + 1)]
    return CostOracle(N, "gap", {"g": g, "a": a, "b": b}, mode, name="random")


def segmentation_oracle(data: Sequence[Number]) -> CostOracle:
    """Interval SSE oracle on ``N = len(data) + 1`` boundary nodes.

    ``c(i, j)`` is the squared error of ``data[i-1 : j-1]`` around its mean,
    from prefix sums of ``x`` and ``x**2``; an M-link path from 1 to N is an
    M-segment piecewise-constant fit.  The interval SSE is Monge when the
    data are monotone (the 1-D k-means case); other orderings can break the
    quadrangle inequality, and the SMAWK-based solvers then lose their
    optimality guarantee.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("segmentation needs at least two data points")
    s1 = np.concatenate([[0.0], np.cumsum(x)])
    s2 = np.concatenate([[0.0], np.cumsum(x * x)])
    return CostOracle(len(x) + 1, "sse", {"s1": s1, "s2": s2, "data": x}, "float",
                      name="segmentation")


def from_callable(N: int, fn: Callable[[int, int], Number], mode: str = "int",
                  name: str = "callable") -> CostOracle:
    return CostOracle(N, "callable", {}, mode, fn=fn, name=name)


def from_dense(c: np.ndarray, mode: Optional[str] = None, name: str = "explicit") -> CostOracle:
    """Oracle over an explicit ``(N+1) x (N+1)`` table indexed ``c[i][j]``."""
    c = np.asarray(c)
    N = c.shape[0] - 1
    if mode is None:
        mode = "int" if np.issubdtype(c.dtype, np.integer) else "float"
    c = c.astype(np.int64 if mode == "int" else np.float64)
    return CostOracle(N, "dense", {"c": c}, mode, name=name)


def materialize(o: CostOracle) -> CostOracle:
    """Dense copy of any oracle (evaluations are not counted)."""
    c = np.zeros((o.N + 1, o.N + 1), dtype=o.dtype)
    for i in range(1, o.N):
        for j in range(i + 1, o.N + 1):
            c[i, j] = o.peek(i, j)
    return from_dense(c, o.mode, name=o.name)


# ----------------------------------------------------------------------------
# views and paths


class ContractedView:
    """The current graph ``G_s``: root ``s``, edges out of ``s`` read from
    the override buffer ``h``, every other edge from the base oracle, and
    every length shifted down by ``lam``."""

    __slots__ = ("base", "s", "h", "lam")

    def __init__(self, base: CostOracle, s: int = 1, h=None, lam: Number = 0):
        if not 1 <= s < base.N:
            raise ValueError(f"root {s} outside [1:{base.N - 1}]")
        self.base = base
        self.s = s
        self.h = h
        self.lam = lam

    @property
    def N(self) -> int:
        return self.base.N

    @property
    def override_root(self) -> int:
        """Root whose out-edges come from ``h``; -1 when there is none."""
        return self.s if self.h is not None else -1

    def cost(self, i: int, j: int) -> Number:
        if i == self.s and self.h is not None:
            v = self.base.scalar(self.h[j])
        else:
            v = self.base(i, j)
        return v - self.lam

    __call__ = cost

    def peek(self, i: int, j: int) -> Number:
        if i == self.s and self.h is not None:
            v = self.base.scalar(self.h[j])
        else:
            v = self.base.peek(i, j)
        return v - self.lam

    def shifted(self, lam: Number) -> "ContractedView":
        """Same graph with total shift ``lam`` (not added to the current one)."""
        return ContractedView(self.base, self.s, self.h, lam)

    def frozen(self) -> "ContractedView":
        """Copy that owns a snapshot of ``h`` (for tests that outlive a solve)."""
        h = None if self.h is None else self.h.copy()
        return ContractedView(self.base, self.s, h, self.lam)

    def __repr__(self):
        return f"ContractedView(s={self.s}, N={self.N}, lam={self.lam})"


@dataclass(frozen=True)
class LinkPath:
    """Strictly increasing node sequence; ``length`` is under the view that
    produced it (None when unknown)."""

    nodes: tuple
    length: Optional[Number] = None

    def __post_init__(self):
        nodes = tuple(int(v) for v in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 2:
            raise ValueError("a path needs at least one link")
        if any(b <= a for a, b in zip(nodes, nodes[1:])):
            raise ValueError(f"path nodes must increase strictly: {nodes}")

    @property
    def links(self) -> int:
        return len(self.nodes) - 1

    def measure(self, cost: Callable[[int, int], Number]) -> Number:
        return sum(cost(a, b) for a, b in zip(self.nodes, self.nodes[1:]))

    def with_length(self, cost: Callable[[int, int], Number]) -> "LinkPath":
        return LinkPath(self.nodes, self.measure(cost))


# ----------------------------------------------------------------------------
# Monge verification


def _range_of(o) -> tuple[int, int, Callable]:
    if isinstance(o, ContractedView):
        return o.s, o.N, o.peek
    return 1, o.N, o.peek


def verify_submodular(o, mode: str = "exhaustive") -> tuple[bool, Optional[tuple]]:
    """Check ``c(i,l) + c(j,k) >= c(i,k) + c(j,l)`` for ``i<j<k<l``.

    ``mode="adjacent"`` checks only quadruples ``(i, i+1, k, k+1)``, which
    implies the full property.  Returns ``(ok, first_violation)``.
    """
    lo, N, c = _range_of(o)
    if mode == "exhaustive":
        if N - lo + 1 > 64:
            raise ValueError("exhaustive check limited to 64 nodes")
        for i, j, k, l in itertools.combinations(range(lo, N + 1), 4):
            if c(i, l) + c(j, k) < c(i, k) + c(j, l):
                return False, (i, j, k, l)
        return True, None
    if mode == "adjacent":
        for i in range(lo, N - 2):
            for k in range(i + 2, N):
                if c(i, k + 1) + c(i + 1, k) < c(i, k) + c(i + 1, k + 1):
                    return False, (i, i + 1, k, k + 1)
        return True, None
    raise ValueError(f"unknown mode {mode!r}")


def sample_submodular(o, samples: int = 2000, seed: int = 0) -> tuple[bool, Optional[tuple]]:
    """Adjacent-quadruple check on random positions (for large instances)."""
    lo, N, c = _range_of(o)
    if N - lo < 3:
        return True, None
    rng = random.Random(seed)
    for _ in range(samples):
        i = rng.randint(lo, N - 3)
        k = rng.randint(i + 2, N - 1)
        if c(i, k + 1) + c(i + 1, k) < c(i, k) + c(i + 1, k + 1):
            return False, (i, i + 1, k, k + 1)
    return True, None


# ----------------------------------------------------------------------------
# file formats


def _parse_number(tok: str) -> Number:
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def read_instance(path) -> CostOracle:
    """Explicit instance: line 1 is N, then line i holds c(i,i+1) .. c(i,N)."""
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 1:
        raise ValueError("first line must hold N")
    N = int(lines[0][0])
    if N < 2:
        raise ValueError("need N >= 2")
    if len(lines) != N:
        raise ValueError(f"expected {N - 1} cost lines, found {len(lines) - 1}")
    vals = []
    for i in range(1, N):
        row = lines[i]
        if len(row) != N - i:
            raise ValueError(f"line {i + 1}: expected {N - i} costs, found {len(row)}")
        vals.append([_parse_number(t) for t in row])
    is_int = all(isinstance(v, int) for row in vals for v in row)
    c = np.zeros((N + 1, N + 1), dtype=np.int64 if is_int else np.float64)
    for i, row in enumerate(vals, start=1):
        c[i, i + 1:] = row
    return from_dense(c, "int" if is_int else "float", name=str(path))


def format_instance(o: CostOracle) -> str:
    lines = [str(o.N)]
    for i in range(1, o.N):
        lines.append(" ".join(repr(o.peek(i, j)) for j in range(i + 1, o.N + 1)))
    return "\n".join(lines) + "\n"


def write_instance(o: CostOracle, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_instance(o))


def read_data(path) -> list[float]:
    """Segmentation data: one number per line."""
    out = []
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            t = line.strip()
            if not t or t.startswith("#"):
                continue
            try:
                out.append(float(t))
            except ValueError:
                raise ValueError(f"line {ln}: not a number: {t!r}") from None
    return out


GENERATORS = {
    "convex-sq": lambda N, seed, mode: convex_sq(N, mode),
    "linear": lambda N, seed, mode: linear(N, mode),
    "random": lambda N, seed, mode: gen_random_monge(N, seed, mode),
}


def generate(family: str, N: int, seed: int = 0, mode: str = "int") -> CostOracle:
    try:
        return GENERATORS[family](N, seed, mode)
    except KeyError:
        raise ValueError(f"unknown family {family!r}") from None


def path_count(N: int, m: int) -> int:
    """Number of m-link paths from 1 to N."""
    return math.comb(N - 2, m - 1)


def all_paths(s: int, n: int, m: int) -> Iterable[tuple]:
    for mid in itertools.combinations(range(s + 1, n), m - 1):
        yield (s,) + mid + (n,)
