"""Pure-Python/numpy fallback for the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

import math

import numpy as np


def _demand(prices, money, seg_ptr, seg_good, seg_len, seg_slope, demand):
    demand[:] = 0.0
    for b in range(len(money)):
        lo, hi = seg_ptr[b], seg_ptr[b + 1]
        segs = []
        for s in range(lo, hi):
            g = seg_good[s]
            segs.append((-(seg_slope[s] / prices[g]), math.isinf(seg_len[s]), g, s))
        segs.sort()
        remaining = money[b]
        for _, inf, g, s in segs:
            pr = prices[g]
            if inf:
                demand[g] += remaining / pr
                break
            cost = seg_len[s] * pr
            if cost >= remaining:
                demand[g] += remaining / pr
                break
            demand[g] += seg_len[s]
            remaining -= cost


def canonical_demand_float(prices, money, seg_ptr, seg_good, seg_len, seg_slope, demand_out):
    _demand(prices, money, seg_ptr, seg_good, seg_len, seg_slope, demand_out)


def tatonnement_chunk(prices, supply, money, seg_ptr, seg_good, seg_len, seg_slope, step, floor, iters,
                      trace, stop_below):
    demand = np.zeros(len(supply))
    for it in range(iters):
        _demand(prices, money, seg_ptr, seg_good, seg_len, seg_slope, demand)
        worst = float(np.max(np.abs(demand - supply) / supply))
        trace[it] = worst
        if worst < stop_below:
            return it + 1, worst
        for j in range(len(supply)):
            z = demand[j] - supply[j]
            new = prices[j] * (1.0 + step * z / supply[j])
            prices[j] = new if new > floor else floor
    _demand(prices, money, seg_ptr, seg_good, seg_len, seg_slope, demand)
    return iters, float(np.max(np.abs(demand - supply) / supply))


def lattice_utilities(points, starts, lengths, slopes, scale):
    points = np.asarray(points, dtype=np.int64)
    x = points * np.asarray(scale, dtype=np.int64)[None, :]
    d = x[:, :, None] - np.asarray(starts, dtype=np.int64)[None, :, :]
    np.maximum(d, 0, out=d)
    lengths = np.asarray(lengths, dtype=np.int64)
    capped = np.where(lengths[None, :, :] >= 0, np.minimum(d, lengths[None, :, :]), d)
    return (capped * np.asarray(slopes, dtype=np.int64)[None, :, :]).sum(axis=(1, 2))
