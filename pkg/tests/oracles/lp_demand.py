"""Optimal utility by enumerating vertices of the segment LP.

Variables are the amounts bought on each positive-slope segment. The
feasible region is a box cut by one budget hyperplane, so every vertex has
at most one coordinate strictly between its bounds. Concavity makes the LP
optimum equal to the buyer's optimal utility at positive prices.
"""
from fractions import Fraction
from itertools import product

from fisherplc.plc import evaluate


def _segments(rep):
    out = []
    prev = Fraction(0)
    for k, slope in enumerate(rep.slopes):
        if k < len(rep.breakpoints):
            end = rep.breakpoints[k]
            out.append((slope, end - prev))
            prev = end
        else:
            out.append((slope, None))
    return out


def lp_optimum(market, i, prices):
    buyer = market.buyers[i]
    w = buyer.money
    var = []  # (price, slope, upper bound)
    for j, rep in buyer.valuations.items():
        p = prices[j]
        for slope, length in _segments(rep):
            if slope <= 0:
                continue
            cap = w / p if length is None else min(length, w / p)
            var.append((p, slope, cap))
    best = Fraction(0)
    n = len(var)
    for mask in product((0, 1), repeat=n):
        cost = sum((v[0] * v[2] for v, b in zip(var, mask) if b), Fraction(0))
        if cost > w:
            continue
        value = sum((v[1] * v[2] for v, b in zip(var, mask) if b), Fraction(0))
        best = max(best, value)
        rest = w - cost
        for k, b in enumerate(mask):
            if b:
                continue
            p, slope, cap = var[k]
            best = max(best, value + slope * min(cap, rest / p))
    return best


def bundle_utility(market, i, bundle):
    return sum((evaluate(market.buyers[i].valuation(j), x) for j, x in enumerate(bundle)), Fraction(0))


def direct_equilibrium_check(market, prices, allocation, eps=Fraction(0)):
    """Straight-line check of optimal bundles plus clearing within ``eps``."""
    for i, bundle in enumerate(allocation):
        cost = sum(p * x for p, x in zip(prices, bundle))
        if cost > market.buyers[i].money:
            return False
        if bundle_utility(market, i, bundle) != lp_optimum(market, i, prices):
            return False
    for j, c in enumerate(market.supplies):
        total = sum(a[j] for a in allocation)
        if eps == 0:
            if total > c or (prices[j] > 0 and total != c):
                return False
        elif abs(total - c) > eps * c:
            return False
    return True
