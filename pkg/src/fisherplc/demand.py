"""Bang-per-buck demand oracle for separable PLC buyers.

``compute_demand`` returns a description of the whole optimal-bundle set
OPT(i, p), not a single bundle: certification needs every optimal bundle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Dict, List, Optional, Sequence, Tuple

from .market import Market, bundle_cost, utility
from .plc import evaluate, satiation_point, segments
from .rational import INF, format_extended, format_rational, to_fraction
from .verdict import Verdict


class UnboundedDemand(ValueError):
    """Raised when a buyer's optimal utility is unbounded at the given prices."""

    def __init__(self, buyer: int, good: int):
        super().__init__(f"buyer {buyer + 1} has unbounded demand for zero-priced good G_{good + 1}")
        self.buyer = buyer
        self.good = good


@dataclass(frozen=True)
class TieEdge:
    good: int
    capacity: object  # units of good, Fraction or INF
    slope: Fraction

    def money_capacity(self, price: Fraction):
        return INF if self.capacity is INF else self.capacity * price


@dataclass(frozen=True)
class DemandProfile:
    buyer: int
    money: Fraction
    mandatory: Dict[int, Fraction]
    tie_ratio: Optional[Fraction]
    tie_edges: Tuple[TieEdge, ...]
    leftover_money: Fraction
    satiated: bool
    free_goods: Tuple[int, ...]
    # Only meaningful when satiated: money that may optionally be spent on
    # positively priced goods whose marginal value is already zero.
    unspent_money: Fraction = Fraction(0)
    zero_margin_goods: Tuple[int, ...] = ()

    def mandatory_cost(self, prices: Sequence[Fraction]) -> Fraction:
        return sum((prices[j] * x for j, x in self.mandatory.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "buyer": self.buyer,
            "money": format_rational(self.money),
            "mandatory": {str(j): format_rational(x) for j, x in self.mandatory.items()},
            "tie_ratio": None if self.tie_ratio is None else format_rational(self.tie_ratio),
            "tie_edges": [
                {"good": e.good, "capacity": format_extended(e.capacity), "slope": format_rational(e.slope)}
                for e in self.tie_edges
            ],
            "leftover_money": format_rational(self.leftover_money),
            "satiated": self.satiated,
            "free_goods": list(self.free_goods),
            "unspent_money": format_rational(self.unspent_money),
            "zero_margin_goods": list(self.zero_margin_goods),
        }


def compute_demand(m: Market, i: int, prices: Sequence[Fraction]) -> DemandProfile:
    buyer = m.buyers[i]
    mandatory: Dict[int, Fraction] = {}
    free_goods: List[int] = []
    zero_margin: List[int] = []
    items = []  # (ratio, good, length, slope)
    for j in range(m.num_goods):
        rep = buyer.valuations.get(j)
        pj = prices[j]
        if pj == 0:
            if rep is not None:
                if rep.slopes[-1] > 0:
                    raise UnboundedDemand(i, j)
                stop = satiation_point(rep)
                if stop > 0:
                    mandatory[j] = stop
            free_goods.append(j)
            continue
        if rep is None:
            zero_margin.append(j)
            continue
        for seg in segments(rep):
            if seg.slope > 0:
                items.append((seg.slope / pj, j, seg.length, seg.slope))
        if rep.slopes[-1] == 0:
            zero_margin.append(j)

    items.sort(key=lambda it: (-it[0], it[1]))
    remaining = buyer.money
    for ratio, group in groupby(items, key=lambda it: it[0]):
        group = list(group)
        cost = Fraction(0)
        for _, j, length, _ in group:
            if length is INF:
                cost = INF
                break
            cost += length * prices[j]
        if cost is not INF and cost < remaining:
            for _, j, length, _ in group:
                mandatory[j] = mandatory.get(j, Fraction(0)) + length
            remaining -= cost
            continue
        edges = tuple(TieEdge(j, length, slope) for _, j, length, slope in group)
        return DemandProfile(
            buyer=i,
            money=buyer.money,
            mandatory=mandatory,
            tie_ratio=ratio,
            tie_edges=edges,
            leftover_money=remaining,
            satiated=False,
            free_goods=tuple(free_goods),
        )
    return DemandProfile(
        buyer=i,
        money=buyer.money,
        mandatory=mandatory,
        tie_ratio=None,
        tie_edges=(),
        leftover_money=Fraction(0),
        satiated=True,
        free_goods=tuple(free_goods),
        unspent_money=remaining,
        zero_margin_goods=tuple(zero_margin),
    )


def profile_utility(m: Market, profile: DemandProfile) -> Fraction:
    buyer = m.buyers[profile.buyer]
    total = Fraction(0)
    for j, x in profile.mandatory.items():
        total += evaluate(buyer.valuation(j), x)
    if profile.tie_ratio is not None:
        total += profile.tie_ratio * profile.leftover_money
    return total


def optimal_utility(m: Market, i: int, prices: Sequence[Fraction]) -> Fraction:
    return profile_utility(m, compute_demand(m, i, prices))


def canonical_bundle(profile: DemandProfile, prices: Sequence[Fraction], num_goods: int) -> List[Fraction]:
    """Deterministic member of OPT: tie edges filled by ascending good index,
    infinite-capacity edges last."""
    bundle = [Fraction(0)] * num_goods
    for j, x in profile.mandatory.items():
        bundle[j] = x
    left = profile.leftover_money
    finite = sorted((e for e in profile.tie_edges if e.capacity is not INF), key=lambda e: e.good)
    infinite = sorted((e for e in profile.tie_edges if e.capacity is INF), key=lambda e: e.good)
    for e in finite + infinite:
        if left <= 0:
            break
        cap = e.money_capacity(prices[e.good])
        spend = left if cap is INF else min(left, cap)
        bundle[e.good] += spend / prices[e.good]
        left -= spend
    return bundle


def is_optimal_bundle(m: Market, i: int, prices: Sequence[Fraction], bundle: Sequence) -> Verdict:
    bundle = [to_fraction(x) for x in bundle]
    if len(bundle) != m.num_goods:
        raise ValueError(f"bundle has {len(bundle)} entries, market has {m.num_goods} goods")
    cost = bundle_cost(prices, bundle)
    money = m.buyers[i].money
    if cost > money:
        return Verdict.no("budget-violation", cost=cost, money=money)
    best = optimal_utility(m, i, prices)
    got = utility(m, i, bundle)
    if got != best:
        return Verdict.no("sub-optimal", utility=got, optimum=best)
    return Verdict.yes(utility=got, cost=cost)
