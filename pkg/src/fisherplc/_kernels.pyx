# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Semantics must match ``_kernels_py`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, isinf, fabs

cnp.import_array()


cdef void _sort_segments(long[:] order, int n, double[:] key_ratio, char[:] key_inf, long[:] key_good) noexcept nogil:
    # insertion sort by (-ratio, is_inf, good); n is tiny
    cdef int a, b
    cdef long cur
    for a in range(1, n):
        cur = order[a]
        b = a - 1
        while b >= 0 and (
            key_ratio[order[b]] < key_ratio[cur]
            or (key_ratio[order[b]] == key_ratio[cur] and (
                key_inf[order[b]] > key_inf[cur]
                or (key_inf[order[b]] == key_inf[cur] and key_good[order[b]] > key_good[cur])))
        ):
            order[b + 1] = order[b]
            b -= 1
        order[b + 1] = cur


def canonical_demand_float(
    double[:] prices, double[:] money, long[:] seg_ptr, long[:] seg_good,
    double[:] seg_len, double[:] seg_slope, double[:] demand_out,
):
    cdef Py_ssize_t nb = money.shape[0]
    cdef Py_ssize_t ns = seg_good.shape[0]
    cdef double[:] ratio = np.empty(ns, dtype=np.float64)
    cdef char[:] isinf_ = np.empty(ns, dtype=np.int8)
    cdef long[:] order = np.empty(max(ns, 1), dtype=np.int64)
    _demand(prices, money, seg_ptr, seg_good, seg_len, seg_slope, demand_out, ratio, isinf_, order)


cdef void _demand(
    double[:] prices, double[:] money, long[:] seg_ptr, long[:] seg_good,
    double[:] seg_len, double[:] seg_slope, double[:] demand,
    double[:] ratio, char[:] isinf_, long[:] order,
) noexcept nogil:
    cdef Py_ssize_t nb = money.shape[0]
    cdef Py_ssize_t b, s, lo, hi, cnt, t
    cdef double remaining, cost, pr
    cdef long g
    for s in range(demand.shape[0]):
        demand[s] = 0.0
    for s in range(seg_good.shape[0]):
        ratio[s] = seg_slope[s] / prices[seg_good[s]]
        isinf_[s] = 1 if isinf(seg_len[s]) else 0
    for b in range(nb):
        lo = seg_ptr[b]
        hi = seg_ptr[b + 1]
        cnt = hi - lo
        for t in range(cnt):
            order[t] = lo + t
        _sort_segments(order, <int>cnt, ratio, isinf_, seg_good)
        remaining = money[b]
        for t in range(cnt):
            s = order[t]
            g = seg_good[s]
            pr = prices[g]
            if isinf_[s]:
                demand[g] += remaining / pr
                break
            cost = seg_len[s] * pr
            if cost >= remaining:
                demand[g] += remaining / pr
                break
            demand[g] += seg_len[s]
            remaining -= cost


def tatonnement_chunk(
    double[:] prices, double[:] supply, double[:] money, long[:] seg_ptr, long[:] seg_good,
    double[:] seg_len, double[:] seg_slope, double step, double floor, long iters,
    double[:] trace, double stop_below,
):
    """Run up to ``iters`` multiplicative updates in place.

    Returns (iterations run, max relative excess at the final prices). Stops
    early, before updating, when the max relative excess is below
    ``stop_below``.
    """
    cdef Py_ssize_t ng = supply.shape[0]
    cdef Py_ssize_t ns = seg_good.shape[0]
    cdef double[:] demand = np.zeros(ng, dtype=np.float64)
    cdef double[:] ratio = np.empty(max(ns, 1), dtype=np.float64)
    cdef char[:] isinf_ = np.empty(max(ns, 1), dtype=np.int8)
    cdef long[:] order = np.empty(max(ns, 1), dtype=np.int64)
    cdef long it
    cdef Py_ssize_t j
    cdef double z, rel, worst, np_
    cdef long done = -1
    with nogil:
        for it in range(iters):
            _demand(prices, money, seg_ptr, seg_good, seg_len, seg_slope, demand, ratio, isinf_, order)
            worst = 0.0
            for j in range(ng):
                rel = fabs(demand[j] - supply[j]) / supply[j]
                if rel > worst:
                    worst = rel
            trace[it] = worst
            if worst < stop_below:
                done = it + 1
                break
            for j in range(ng):
                z = demand[j] - supply[j]
                np_ = prices[j] * (1.0 + step * z / supply[j])
                prices[j] = np_ if np_ > floor else floor
    if done >= 0:
        return done, worst
    _demand(prices, money, seg_ptr, seg_good, seg_len, seg_slope, demand, ratio, isinf_, order)
    worst = 0.0
    for j in range(ng):
        rel = fabs(demand[j] - supply[j]) / supply[j]
        if rel > worst:
            worst = rel
    return iters, worst


def lattice_utilities(
    long[:, :] points, long[:, :] starts, long[:, :] lengths, long[:, :] slopes, long[:] scale,
):
    """Exact scaled utilities of integer lattice bundles.

    value[n] = sum_g sum_s slopes[g,s] * clip(points[n,g]*scale[g] - starts[g,s], 0, lengths[g,s]);
    a negative length means an unbounded segment. Caller guarantees no overflow.
    """
    cdef Py_ssize_t N = points.shape[0]
    cdef Py_ssize_t G = points.shape[1]
    cdef Py_ssize_t S = starts.shape[1]
    out_arr = np.zeros(N, dtype=np.int64)
    cdef long[:] out = out_arr
    cdef Py_ssize_t n, g, s
    cdef long x, d, acc, ln
    with nogil:
        for n in range(N):
            acc = 0
            for g in range(G):
                x = points[n, g] * scale[g]
                for s in range(S):
                    if slopes[g, s] == 0:
                        continue
                    d = x - starts[g, s]
                    if d <= 0:
                        continue
                    ln = lengths[g, s]
                    if ln >= 0 and d > ln:
                        d = ln
                    acc += slopes[g, s] * d
            out[n] = acc
    return out_arr
