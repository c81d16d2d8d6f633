"""Compiled vs pure-Python kernels on the same solves.

Both backends run the same algorithm, so lengths and evaluation counts must
agree exactly; only wall time differs.

    python3 benchmarks/compare_backends.py --n 512,1024,2048 --seeds 2
"""
from __future__ import annotations

import argparse
import sys
import time

from mongelink import kernels
from mongelink.cc import solve
from mongelink.monge_core import generate


def run(family, N, M, seed, backend, strategy):
    o = generate(family, N, seed)
    t0 = time.perf_counter()
    r = solve(o, M, backend=backend, strategy=strategy)
    return r.length, r.stats.base_evals, time.perf_counter() - t0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="256,512,1024,2048")
    ap.add_argument("--m-frac", type=float, default=0.5)
    ap.add_argument("--gen", default="random")
    ap.add_argument("--seeds", type=int, default=2)
    ap.add_argument("--spt", choices=["online", "dnc"], default="online")
    args = ap.parse_args(argv)
    if "compiled" not in kernels.available():
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'N':>6} {'M':>6} {'seed':>4} {'evals':>10} {'compiled s':>11} "
          f"{'python s':>9} {'speedup':>8}")
    mismatches = 0
    for N in (int(t) for t in args.n.split(",")):
        M = max(1, round(args.m_frac * N))
        for seed in range(args.seeds):
            lc, ec, tc = run(args.gen, N, M, seed, "compiled", args.spt)
            lp, ep, tp = run(args.gen, N, M, seed, "python", args.spt)
            if (lc, ec) != (lp, ep):
                mismatches += 1
                print(f"MISMATCH N={N} seed={seed}: {(lc, ec)} vs {(lp, ep)}")
            print(f"{N:>6} {M:>6} {seed:>4} {ec:>10} {tc:>11.4f} {tp:>9.3f} "
                  f"{tp / max(tc, 1e-9):>8.1f}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
