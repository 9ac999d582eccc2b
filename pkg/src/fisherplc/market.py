"""Fisher market data model.

Goods and buyers are addressed by zero-based position. Documentation and
CLI display use one-based names (``G_1`` is index 0, ``T_1`` is buyer 0).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .plc import PLCRepresentation, ZERO, classify, evaluate, validate_plc
from .rational import RationalLike, to_fraction


@dataclass(frozen=True)
class Buyer:
    money: Fraction
    valuations: Mapping[int, PLCRepresentation] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "money", to_fraction(self.money))
        vals = {int(j): r for j, r in sorted(self.valuations.items()) if not r.is_zero}
        object.__setattr__(self, "valuations", vals)

    def valuation(self, good: int) -> PLCRepresentation:
        return self.valuations.get(good, ZERO)


@dataclass(frozen=True)
class Market:
    supplies: Tuple[Fraction, ...]
    buyers: Tuple[Buyer, ...]

    def __post_init__(self):
        object.__setattr__(self, "supplies", tuple(to_fraction(c) for c in self.supplies))
        object.__setattr__(self, "buyers", tuple(self.buyers))
        if not self.supplies:
            raise ValueError("a market needs at least one good")
        if not self.buyers:
            raise ValueError("a market needs at least one buyer")
        for j, c in enumerate(self.supplies):
            if c <= 0:
                raise ValueError(f"supply of G_{j + 1} must be positive, got {c}")
        n = len(self.supplies)
        for i, b in enumerate(self.buyers):
            if b.money <= 0:
                raise ValueError(f"money of buyer {i + 1} must be positive, got {b.money}")
            for j, rep in b.valuations.items():
                if not 0 <= j < n:
                    raise ValueError(f"buyer {i + 1} values good index {j} outside [0, {n})")
                problem = validate_plc(rep)
                if problem is not None:
                    raise ValueError(f"buyer {i + 1}, good G_{j + 1}: {problem}")

    @property
    def num_goods(self) -> int:
        return len(self.supplies)

    @property
    def num_buyers(self) -> int:
        return len(self.buyers)

    def buyer_name(self, i: int) -> str:
        return self.buyers[i].label or f"T_{i + 1}"


@dataclass(frozen=True)
class MarketReport:
    maxfield: bool
    alpha_bounded: bool
    sparsity_ok: bool
    segment_bound_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.maxfield and self.alpha_bounded and self.sparsity_ok and self.segment_bound_ok


def as_prices(values: Iterable[RationalLike], num_goods: Optional[int] = None) -> Tuple[Fraction, ...]:
    """Coerce to an exact price vector: nonnegative and not identically zero."""
    p = tuple(to_fraction(v) for v in values)
    if num_goods is not None and len(p) != num_goods:
        raise ValueError(f"price vector has {len(p)} entries, market has {num_goods} goods")
    if any(v < 0 for v in p):
        raise ValueError("prices must be nonnegative")
    if not any(p):
        raise ValueError("price vector must be nonzero")
    return p


def validate_market(m: Market, alpha: RationalLike, t: int, max_segments: int) -> MarketReport:
    maxfield = alpha_ok = sparse_ok = seg_ok = True
    for b in m.buyers:
        monotone = False
        for rep in b.valuations.values():
            flags = classify(rep, alpha)
            monotone = monotone or flags.strictly_monotone
            alpha_ok = alpha_ok and flags.alpha_bounded
            seg_ok = seg_ok and flags.segment_count <= max_segments
        maxfield = maxfield and monotone
        sparse_ok = sparse_ok and len(b.valuations) <= t
    return MarketReport(maxfield, alpha_ok, sparse_ok, seg_ok)


def utility(m: Market, i: int, bundle: Sequence[RationalLike]) -> Fraction:
    if len(bundle) != m.num_goods:
        raise ValueError(f"bundle has {len(bundle)} entries, market has {m.num_goods} goods")
    total = Fraction(0)
    for j, x in enumerate(bundle):
        x = to_fraction(x)
        if x < 0:
            raise ValueError(f"negative amount {x} of G_{j + 1}")
        rep = m.buyers[i].valuations.get(j)
        if rep is not None:
            total += evaluate(rep, x)
    return total


def bundle_cost(prices: Sequence[Fraction], bundle: Sequence[RationalLike]) -> Fraction:
    return sum((p * to_fraction(x) for p, x in zip(prices, bundle)), Fraction(0))
