"""Instance families and small shared oracles for the test suite."""
from __future__ import annotations

import functools

import numpy as np

from mongelink import monge_core as mc
from mongelink.baseline import brute_force

SMALL_NS = range(4, 13)
RANDOM_SEEDS = range(50)

# pinned work constants (measured maxima: pbf 8.4, smawk 5.2 on all-tie
# staircases, spt 23.4, probe 38.2 on short searches where a handful of
# tree builds dominate the log term)
PBF_C = 10
SMAWK_C = 6
SPT_C = 32
PROBE_C = 48


def small_family(N):
    """convex-sq, linear and 50 random instances on N nodes."""
    yield mc.convex_sq(N)
    yield mc.linear(N)
    for seed in RANDOM_SEEDS:
        yield mc.gen_random_monge(N, seed)


def small_grid():
    for N in SMALL_NS:
        yield from small_family(N)


@functools.lru_cache(maxsize=None)
def brute(name: str, N: int, seed: int):
    return brute_force(instance(name, N, seed))


def instance(name: str, N: int, seed: int = 0, mode: str = "int"):
    return mc.generate(name, N, seed, mode)


def lambda_samples(b, extra: int = 20) -> list:
    """Every finite delta over all (m, n), midpoints between consecutive
    ones, and values beyond both ends; at least ``extra`` samples."""
    ds = sorted({b.f[(m + 1, n)] - b.f[(m, n)]
                 for (m, n) in b.f if (m + 1, n) in b.f})
    out = list(ds)
    out += [(a + c) // 2 for a, c in zip(ds, ds[1:]) if c - a > 1]
    lo, hi = (ds[0], ds[-1]) if ds else (0, 0)
    out += [lo - 1, lo - 7, hi + 1, hi + 7]
    k = 0
    while len(out) < extra:
        out.append(lo - 3 - k)
        k += 1
    return out


def contracted_view(o, s, h_values=None):
    """View rooted at s whose h row is the base row (a trivial contraction)."""
    if s == 1 and h_values is None:
        return mc.ContractedView(o, 1)
    h = np.zeros(o.N + 1, dtype=o.dtype)
    for j in range(s + 1, o.N + 1):
        h[j] = o.peek(s, j) if h_values is None else h_values[j]
    return mc.ContractedView(o, s, h)
