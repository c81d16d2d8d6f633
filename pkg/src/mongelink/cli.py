"""Command-line entry point: ``mongelink {solve,bench,segment,verify,gen}``.

Exit codes: 0 ok, 1 usage error, 2 bad input, 3 internal assertion.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import monge_core as mc
from .baseline import BRUTE_MAX_N, brute_force, dp_full
from .cc import solve
from .workspace import CellAccountant

log = logging.getLogger("mongelink")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

BENCH_FIELDS = ["family", "N", "M", "algo", "base_evals", "wall_ns", "peak_cells",
                "stages", "hits"]

# the reference DP keeps M*(N+1) parent cells; refuse grids beyond this
DEFAULT_MAX_CELLS = 64 * 1024 * 1024


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}")


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", help="explicit instance file")
    p.add_argument("--gen", choices=sorted(mc.GENERATORS), help="generated family")
    p.add_argument("--n", type=int, help="node count for --gen")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=mc.MODES, default="int")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mongelink", description=__doc__.splitlines()[0])
    ap.add_argument("--verbosity", "-v", type=int, default=0)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="shortest M-link path of one instance")
    _add_source(p)
    p.add_argument("--m", type=int, help="link count")
    p.add_argument("--m-frac", type=float, help="link count as a fraction of N")
    p.add_argument("--algo", choices=["cc", "dp", "brute"], default="cc")
    p.add_argument("--spt", choices=["online", "dnc"], default="online")
    p.add_argument("--backend", choices=["compiled", "python"])
    p.add_argument("--verbosity", "-v", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("bench", help="evaluation counts over a grid, as CSV")
    p.add_argument("--n", type=_csv_ints, default=[1024, 2048, 4096])
    p.add_argument("--m-frac", type=_csv_floats, default=[0.5])
    p.add_argument("--gen", type=lambda t: t.split(","), default=["random"])
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--seeds", type=int, default=1, help="seeds per grid cell")
    p.add_argument("--algo", type=lambda t: t.split(","), default=["cc", "dp"])
    p.add_argument("--mode", choices=mc.MODES, default="int")
    p.add_argument("--spt", choices=["online", "dnc"], default="online")
    p.add_argument("--csv", help="write CSV here instead of standard output")
    p.add_argument("--jobs", type=int, default=1, help="grid cells run in parallel")
    p.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)
    p.add_argument("--verbosity", "-v", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("segment", help="optimal piecewise-constant fit")
    p.add_argument("--file", help="data file, one number per line")
    p.add_argument("--values", type=_csv_floats, help="comma-separated data")
    p.add_argument("--m", type=int, required=True, help="number of segments")
    p.add_argument("--algo", choices=["cc", "dp", "brute"], default="cc")
    p.add_argument("--verbosity", "-v", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("verify", help="check the Monge inequality")
    _add_source(p)
    p.add_argument("--check", choices=["exhaustive", "adjacent"], default="adjacent")

    p = sub.add_parser("gen", help="write a generated instance file")
    p.add_argument("--gen", choices=sorted(mc.GENERATORS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=mc.MODES, default="int")
    p.add_argument("--out", help="output path (default: standard output)")
    return ap


def load_oracle(args) -> mc.CostOracle:
    if bool(args.file) == bool(args.gen):
        raise UsageError("give exactly one of --file or --gen")
    if args.file:
        try:
            o = mc.read_instance(args.file)
        except OSError as e:
            raise InputError(f"cannot read {args.file}: {e.strerror}") from None
        except ValueError as e:
            raise InputError(f"{args.file}: {e}") from None
        return o.as_float() if args.mode == "float" and o.mode == "int" else o
    if args.n is None:
        raise UsageError("--gen needs --n")
    try:
        return mc.generate(args.gen, args.n, args.seed, args.mode)
    except ValueError as e:
        raise InputError(str(e)) from None


def _link_count(args, N: int) -> int:
    if (args.m is None) == (args.m_frac is None):
        raise UsageError("give exactly one of --m or --m-frac")
    M = args.m if args.m is not None else max(1, round(args.m_frac * N))
    if not 1 <= M <= N - 1:
        raise InputError(f"M={M} outside [1:{N - 1}]")
    return M


def _warn_if_not_monge(o: mc.CostOracle) -> None:
    if o.N <= 64:
        ok, quad = mc.verify_submodular(o, "adjacent")
    else:
        ok, quad = mc.sample_submodular(o)
    if not ok:
        log.warning("instance violates the Monge inequality at %s; result may be wrong", quad)


def run_algo(o: mc.CostOracle, M: int, algo: str, spt: str = "online",
             backend: Optional[str] = None) -> dict:
    """Solve once and return a flat record (shared by solve, segment, bench)."""
    start = o.evals
    if algo == "cc":
        acc = CellAccountant()
        r = solve(o, M, strategy=spt, backend=backend, accountant=acc)
        st = r.stats
        return {"path": r.path, "length": r.length, "base_evals": st.base_evals,
                "wall_ns": st.wall_ns, "peak_cells": st.peak_cells, "stages": st.stages,
                "hits": st.hits, "branch": st.branch, "lam": st.lam, "trace": st.trace}
    if algo == "dp":
        acc = CellAccountant()
        t0 = time.perf_counter_ns()
        d = dp_full(o, M, backend=backend, accountant=acc)
        return {"path": d.path, "length": d.length, "base_evals": o.evals - start,
                "wall_ns": time.perf_counter_ns() - t0, "peak_cells": acc.peak,
                "stages": 0, "hits": 0, "branch": "dp", "lam": None, "trace": []}
    if algo == "brute":
        if o.N > BRUTE_MAX_N:
            raise InputError(f"--algo brute is limited to N <= {BRUTE_MAX_N}")
        b = brute_force(o)
        best = b.optimal_paths(M)[0]
        path = mc.LinkPath(best, b.optimum(M))
        return {"path": path, "length": b.optimum(M), "base_evals": 0, "wall_ns": 0,
                "peak_cells": 0, "stages": 0, "hits": 0, "branch": "brute", "lam": None,
                "trace": []}
    raise UsageError(f"unknown algorithm {algo!r}")


def cmd_solve(args, out) -> int:
    o = load_oracle(args)
    M = _link_count(args, o.N)
    _warn_if_not_monge(o)
    rec = run_algo(o, M, args.algo, args.spt, args.backend)
    print(f"path: {' '.join(map(str, rec['path'].nodes))}", file=out)
    print(f"length: {rec['length']}", file=out)
    print(f"base_evals: {rec['base_evals']}", file=out)
    print(f"peak_cells: {rec['peak_cells']}", file=out)
    if args.verbosity >= 1:
        print(f"branch: {rec['branch']}  lambda: {rec['lam']}  stages: {rec['stages']}"
              f"  hits: {rec['hits']}", file=out)
        for step in rec["trace"]:
            print("  " + " ".join(str(x) for x in step), file=out)
    return EXIT_OK


def _bench_cell(task) -> list[dict]:
    family, N, M, seed, mode, algos, spt = task
    rows = []
    for algo in algos:
        o = mc.generate(family, N, seed, mode)
        rec = run_algo(o, M, algo, spt)
        rows.append({"family": family, "N": N, "M": M, "algo": algo,
                     "base_evals": rec["base_evals"], "wall_ns": rec["wall_ns"],
                     "peak_cells": rec["peak_cells"], "stages": rec["stages"],
                     "hits": rec["hits"]})
    return rows


def bench_tasks(args) -> list[tuple]:
    for a in args.algo:
        if a not in ("cc", "dp"):
            raise UsageError(f"bench algorithms are cc and dp, got {a!r}")
    for fam in args.gen:
        if fam not in mc.GENERATORS:
            raise UsageError(f"unknown family {fam!r}")
    tasks = []
    for fam in args.gen:
        for N in args.n:
            if N < 4:
                raise InputError(f"bench needs N >= 4, got {N}")
            for frac in args.m_frac:
                M = min(N - 1, max(1, round(frac * N)))
                if "dp" in args.algo and M * (N + 1) > args.max_cells:
                    raise InputError(
                        f"N={N}, M={M} needs {M * (N + 1)} DP parent cells, over the "
                        f"limit {args.max_cells}; drop 'dp' from --algo, shrink the grid "
                        f"or raise --max-cells")
                for seed in range(args.seed, args.seed + args.seeds):
                    tasks.append((fam, N, M, seed, args.mode, args.algo, args.spt))
    return tasks


def cmd_bench(args, out) -> int:
    tasks = bench_tasks(args)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_bench_cell, tasks))
    else:
        results = [_bench_cell(t) for t in tasks]
    fh = open(args.csv, "w", newline="") if args.csv else out
    try:
        w = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
        w.writeheader()
        for rows in results:
            for row in rows:
                w.writerow(row)
                log.info("%s N=%d M=%d %s evals=%d", row["family"], row["N"], row["M"],
                         row["algo"], row["base_evals"])
    finally:
        if args.csv:
            fh.close()
    return EXIT_OK


def segment_summary(data: Sequence[float], path: mc.LinkPath) -> tuple[list, list, float]:
    """Breakpoints (0-based start index of each later segment), means, total SSE."""
    o = mc.segmentation_oracle(data)
    nodes = path.nodes
    breaks = [v - 1 for v in nodes[1:-1]]
    means = []
    for a, b in zip(nodes, nodes[1:]):
        seg = data[a - 1:b - 1]
        means.append(sum(seg) / len(seg))
    sse = sum(o.peek(a, b) for a, b in zip(nodes, nodes[1:]))
    return breaks, means, sse


def cmd_segment(args, out) -> int:
    if bool(args.file) == (args.values is not None):
        raise UsageError("give exactly one of --file or --values")
    if args.file:
        try:
            data = mc.read_data(args.file)
        except OSError as e:
            raise InputError(f"cannot read {args.file}: {e.strerror}") from None
        except ValueError as e:
            raise InputError(f"{args.file}: {e}") from None
    else:
        data = args.values
    if len(data) < 2:
        raise InputError("segmentation needs at least two data points")
    o = mc.segmentation_oracle(data)
    if not 1 <= args.m <= o.N - 1:
        raise InputError(f"number of segments {args.m} outside [1:{len(data)}]")
    _warn_if_not_monge(o)
    rec = run_algo(o, args.m, args.algo)
    breaks, means, sse = segment_summary(data, rec["path"])
    print(f"breakpoints: {' '.join(map(str, breaks))}", file=out)
    print(f"means: {' '.join(f'{m:.6g}' for m in means)}", file=out)
    print(f"sse: {sse:.10g}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    o = load_oracle(args)
    try:
        ok, quad = mc.verify_submodular(o, args.check)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if ok:
        print("monge: yes", file=out)
    else:
        i, j, k, l = quad
        print(f"monge: no, c({i},{l}) + c({j},{k}) < c({i},{k}) + c({j},{l})", file=out)
    return EXIT_OK if ok else EXIT_INPUT


def cmd_gen(args, out) -> int:
    try:
        o = mc.generate(args.gen, args.n, args.seed, args.mode)
    except ValueError as e:
        raise InputError(str(e)) from None
    if args.out:
        mc.write_instance(o, args.out)
    else:
        out.write(mc.format_instance(o))
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "segment": cmd_segment,
            "verify": cmd_verify, "gen": cmd_gen}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbosity, 2),
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.cmd](args, out)
    except UsageError as e:
        print(f"mongelink: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as e:
        print(f"mongelink: bad input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as e:
        print(f"mongelink: internal assertion failed: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
