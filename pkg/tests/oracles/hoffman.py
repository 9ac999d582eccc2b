"""Feasibility of bounded bipartite transport by Hoffman's circulation condition.

A circulation with bounds l <= f <= u exists iff for every node set X the
lower bounds entering X do not exceed the capacities leaving X. Small
instances enumerate every X exactly.
"""
from fractions import Fraction
from itertools import product

from fisherplc.rational import INF


def hoffman_feasible(buyer_bounds, edges, good_bounds):
    nb, ng = len(buyer_bounds), len(good_bounds)
    S, T = 0, 1
    arcs = []  # (u, v, lo, hi)
    for i, (lo, hi) in enumerate(buyer_bounds):
        arcs.append((S, 2 + i, lo, hi))
    for i, j, cap in edges:
        arcs.append((2 + i, 2 + nb + j, Fraction(0), cap))
    for j, (lo, hi) in enumerate(good_bounds):
        arcs.append((2 + nb + j, T, lo, hi))
    arcs.append((T, S, Fraction(0), INF))
    nodes = 2 + nb + ng
    for mask in product((0, 1), repeat=nodes):
        need = Fraction(0)
        cap = Fraction(0)
        for u, v, lo, hi in arcs:
            if not mask[u] and mask[v]:
                need += lo
            if mask[u] and not mask[v]:
                if hi is INF:
                    cap = INF
                    break
                cap += hi
        if cap is not INF and need > cap:
            return False
    return True
