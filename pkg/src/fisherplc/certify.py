"""Equilibrium certification.

Market clearing over the optimal-bundle sets is a transportation problem in
money units: every buyer's leftover budget must flow over her tie edges so
that each good's total lands in its clearing interval.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .demand import DemandProfile, UnboundedDemand, compute_demand, is_optimal_bundle
from .flow import ClearingInstance, TransportResult, feasible_transport
from .market import Market, as_prices
from .rational import INF, RationalLike, format_rational, to_fraction
from .verdict import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Certificate:
    prices: Tuple[Fraction, ...]
    witness: Tuple[Tuple[Fraction, ...], ...]
    residuals: Tuple[Fraction, ...]
    eps: Fraction
    exact_mode: bool

    certified = True

    def __bool__(self) -> bool:
        return True

    @property
    def clears_exactly(self) -> bool:
        return not any(self.residuals)

    def to_json(self) -> dict:
        return {
            "certified": True,
            "mode": "exact" if self.exact_mode else "approximate",
            "eps": format_rational(self.eps),
            "clears_exactly": self.clears_exactly,
            "witness": [[format_rational(x) for x in row] for row in self.witness],
            "residuals": [format_rational(r) for r in self.residuals],
        }


@dataclass(frozen=True)
class Refutation:
    kind: str  # unbounded-demand | over-demanded | under-demanded | flow-infeasible
    message: str
    good: Optional[int] = None
    buyer: Optional[int] = None
    gap: Optional[Fraction] = None
    details: dict = field(default_factory=dict)

    certified = False

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        out = {"certified": False, "kind": self.kind, "message": self.message}
        if self.good is not None:
            out["good"] = f"G_{self.good + 1}"
        if self.buyer is not None:
            out["buyer"] = self.buyer + 1
        if self.gap is not None:
            out["gap"] = format_rational(self.gap)
        if self.details:
            out["details"] = self.details
        return out


def clearing_bounds(supply: Fraction, price: Fraction, eps: Fraction, exact: bool) -> Tuple[Fraction, Fraction]:
    """Allowed total amount of a good, in good units."""
    if exact:
        return (supply if price > 0 else Fraction(0)), supply
    return max(Fraction(0), (1 - eps) * supply), (1 + eps) * supply


def build_clearing_instance(
    m: Market, prices: Sequence[Fraction], profiles: Sequence[DemandProfile], eps: Fraction, exact: bool
) -> Tuple[ClearingInstance, List[Fraction], List[Tuple[Fraction, Fraction]]]:
    mandatory = [Fraction(0)] * m.num_goods
    for prof in profiles:
        for j, x in prof.mandatory.items():
            mandatory[j] += x
    unit_bounds = [clearing_bounds(c, p, eps, exact) for c, p in zip(m.supplies, prices)]
    good_bounds = []
    for j, (lo, hi) in enumerate(unit_bounds):
        pj = prices[j]
        if pj == 0:
            good_bounds.append((Fraction(0), Fraction(0)))
        else:
            good_bounds.append((max(Fraction(0), pj * (lo - mandatory[j])), max(Fraction(0), pj * (hi - mandatory[j]))))
    buyer_bounds = []
    edges = []
    for prof in profiles:
        i = prof.buyer
        if prof.satiated:
            buyer_bounds.append((Fraction(0), prof.unspent_money))
            if prof.unspent_money > 0:
                edges.extend((i, j, INF) for j in prof.zero_margin_goods)
        else:
            buyer_bounds.append((prof.leftover_money, prof.leftover_money))
            edges.extend((i, e.good, e.money_capacity(prices[e.good])) for e in prof.tie_edges)
    return ClearingInstance(tuple(buyer_bounds), tuple(edges), tuple(good_bounds)), mandatory, unit_bounds


def _quick_refutation(m, prices, inst: ClearingInstance, mandatory, unit_bounds) -> Optional[Refutation]:
    """Cheap necessary conditions; each one names the offending good."""
    for j, (lo, hi) in enumerate(unit_bounds):
        if mandatory[j] > hi:
            return Refutation(
                "over-demanded",
                f"G_{j + 1} demanded at least {mandatory[j]} > allowed {hi}",
                good=j, gap=mandatory[j] - hi,
                details={"demanded": format_rational(mandatory[j]), "allowed": format_rational(hi)},
            )
    finite_out: Dict[int, Fraction] = {}
    inf_out: Dict[int, int] = {}
    for i, j, cap in inst.edges:
        if cap is INF:
            inf_out[i] = inf_out.get(i, 0) + 1
        else:
            finite_out[i] = finite_out.get(i, Fraction(0)) + cap
    forced = [Fraction(0)] * m.num_goods
    reachable: List[object] = [Fraction(0)] * m.num_goods
    for i, j, cap in inst.edges:
        lo_i, hi_i = inst.buyer_bounds[i]
        others_inf = inf_out.get(i, 0) - (1 if cap is INF else 0) > 0
        if not others_inf:
            rest = finite_out.get(i, Fraction(0)) - (0 if cap is INF else cap)
            forced[j] += max(Fraction(0), lo_i - rest)
        add = hi_i if cap is INF else (cap if hi_i is INF else min(cap, hi_i))
        cur = reachable[j]
        reachable[j] = INF if (add is INF or cur is INF) else cur + add
    for j, pj in enumerate(prices):
        if pj == 0:
            continue
        lo, hi = inst.good_bounds[j]
        if forced[j] > hi:
            demanded = mandatory[j] + forced[j] / pj
            return Refutation(
                "over-demanded",
                f"G_{j + 1} demanded at least {demanded} > allowed {unit_bounds[j][1]}",
                good=j, gap=demanded - unit_bounds[j][1],
                details={"demanded": format_rational(demanded), "allowed": format_rational(unit_bounds[j][1])},
            )
    for j, pj in enumerate(prices):
        if pj == 0:
            continue
        lo, hi = inst.good_bounds[j]
        if reachable[j] is not INF and reachable[j] < lo:
            most = mandatory[j] + reachable[j] / pj
            return Refutation(
                "under-demanded",
                f"G_{j + 1} demanded at most {most} < required {unit_bounds[j][0]}",
                good=j, gap=unit_bounds[j][0] - most,
                details={"demanded_max": format_rational(most), "required": format_rational(unit_bounds[j][0])},
            )
    for i, (lo_i, _) in enumerate(inst.buyer_bounds):
        cap = INF if inf_out.get(i) else finite_out.get(i, Fraction(0))
        if cap is not INF and cap < lo_i:
            return Refutation(
                "flow-infeasible", f"buyer {i + 1} cannot place leftover money {lo_i} (capacity {cap})",
                buyer=i, gap=lo_i - cap,
            )
    return None


def certify_equilibrium(
    m: Market, prices: Sequence[RationalLike], eps: RationalLike = 0, exact: bool = False
) -> Union[Certificate, Refutation]:
    """Decide whether ``prices`` is an (eps-approximate) equilibrium of ``m``.

    ``exact=True`` applies the exact clearing rule (equality for positively
    priced goods, at most supply for free goods) and ignores ``eps``.
    """
    p = as_prices(prices, m.num_goods)
    eps = Fraction(0) if exact else to_fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    profiles = []
    for i in range(m.num_buyers):
        try:
            profiles.append(compute_demand(m, i, p))
        except UnboundedDemand as exc:
            return Refutation("unbounded-demand", str(exc), good=exc.good, buyer=exc.buyer)

    inst, mandatory, unit_bounds = build_clearing_instance(m, p, profiles, eps, exact)
    quick = _quick_refutation(m, p, inst, mandatory, unit_bounds)
    if quick is not None:
        return quick
    result = feasible_transport(inst)
    if not result.feasible:
        return Refutation(
            "flow-infeasible",
            result.reason,
            gap=result.deficit,
            details={
                "cut_buyers": [i + 1 for i in result.cut_buyers],
                "cut_goods": [f"G_{j + 1}" for j in result.cut_goods],
            },
        )

    witness = [[Fraction(0)] * m.num_goods for _ in range(m.num_buyers)]
    for prof in profiles:
        for j, x in prof.mandatory.items():
            witness[prof.buyer][j] += x
    for (i, j), money in result.flows.items():
        witness[i][j] += money / p[j]
    for j, pj in enumerate(p):
        if pj == 0:
            lo, hi = unit_bounds[j]
            # free disposal: top the good up to its supply when allowed
            target = min(max(m.supplies[j], lo), hi)
            if target > mandatory[j]:
                witness[0][j] += target - mandatory[j]

    totals = [sum((row[j] for row in witness), Fraction(0)) for j in range(m.num_goods)]
    residuals = tuple(abs(t - c) for t, c in zip(totals, m.supplies))
    cert = Certificate(p, tuple(tuple(r) for r in witness), residuals, eps, exact)
    check = check_allocation(m, p, cert.witness, eps, exact=exact)
    if not check:
        raise AssertionError(f"certificate failed its own cross-check: {check.reason} {check.details}")
    return cert


def check_allocation(
    m: Market, prices: Sequence[RationalLike], allocation: Sequence[Sequence[RationalLike]],
    eps: RationalLike = 0, exact: bool = False,
) -> Verdict:
    p = as_prices(prices, m.num_goods)
    eps = Fraction(0) if exact else to_fraction(eps)
    if len(allocation) != m.num_buyers:
        raise ValueError(f"allocation has {len(allocation)} bundles, market has {m.num_buyers} buyers")
    X = [[to_fraction(x) for x in row] for row in allocation]
    violations = []
    for i, row in enumerate(X):
        if any(x < 0 for x in row):
            violations.append({"buyer": i + 1, "reason": "negative-amount"})
            continue
        try:
            v = is_optimal_bundle(m, i, p, row)
        except UnboundedDemand as exc:
            violations.append({"buyer": i + 1, "reason": "unbounded-demand", "good": exc.good + 1})
            continue
        if not v:
            violations.append({"buyer": i + 1, "reason": v.reason,
                               **{k: format_rational(x) for k, x in v.details.items()}})
    for j, c in enumerate(m.supplies):
        total = sum((row[j] for row in X), Fraction(0))
        lo, hi = clearing_bounds(c, p[j], eps, exact)
        if total > hi:
            violations.append({"good": j + 1, "reason": "over-demanded", "total": format_rational(total),
                               "supply": format_rational(c), "gap": format_rational(total - hi)})
        elif total < lo:
            violations.append({"good": j + 1, "reason": "under-demanded", "total": format_rational(total),
                               "supply": format_rational(c), "gap": format_rational(lo - total)})
    if violations:
        return Verdict.no("allocation is not an equilibrium allocation", violations=violations)
    return Verdict.yes()
