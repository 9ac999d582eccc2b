"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import random
import sys
import time
from fractions import Fraction

import numpy as np

from fisherplc import kernels
from fisherplc.games import BimatrixGame
from fisherplc.kernels import LatticeUtility, pack_market
from fisherplc.reduction import build_reduction_market


def sparse_game(n, seed):
    rng = random.Random(seed)
    cell = lambda: Fraction(rng.randint(-4, 4), 4) if rng.random() < 0.5 else Fraction(0)
    return BimatrixGame([[cell() for _ in range(n)] for _ in range(n)], [[cell() for _ in range(n)] for _ in range(n)])


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_tatonnement(backend, packed, iters):
    prices = np.ones(len(packed[0]))
    trace = np.zeros(iters)
    return lambda: backend.tatonnement_chunk(prices.copy(), *packed, 0.25, 2.0 ** -40, iters, trace, -1.0)


def bench_lattice(backend, tables, points):
    starts, lengths, slopes, scale = (t.astype(np.int64) for t in tables)
    return lambda: backend.lattice_utilities(points, starts, lengths, slopes, scale)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--iters", type=int, default=200)
    ap.add_argument("--points", type=int, default=200_000)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not available; build with pip install -e .", file=sys.stderr)
        return 1

    market, _ = build_reduction_market(sparse_game(3, 0))
    packed = pack_market(market)
    buyer = market.buyers[-1]
    lu = LatticeUtility(buyer.valuations, market.num_goods, 2 ** 12)
    pts = np.random.default_rng(0).integers(0, 2 ** 13, size=(args.points, market.num_goods))

    rows = []
    for name, make, work in (
        ("tatonnement (reduced market, n=3)", lambda b: bench_tatonnement(b, packed, args.iters), f"{args.iters} iters"),
        ("lattice utilities", lambda b: bench_lattice(b, lu._tables, pts), f"{args.points} points"),
    ):
        fast = best_of(args.repeat, make(kernels.compiled))
        slow = best_of(args.repeat, make(kernels.pure))
        rows.append((name, work, fast, slow))

    print(f"{'kernel':36} {'work':>16} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for name, work, fast, slow in rows:
        print(f"{name:36} {work:>16} {fast:11.4f} {slow:10.4f} {slow / fast:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
