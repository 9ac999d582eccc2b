"""Price-regulating markets and the sparse-game-to-market reduction.

Index convention: the construction is written with one-based goods
``G_1..G_{4n+2}`` and buyers; internally good ``G_k`` is index ``k - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .certify import Certificate, Refutation, certify_equilibrium
from .games import BimatrixGame, MixedProfile, check_well_supported, validate_sparse_normalized
from .market import Buyer, Market
from .plc import PLCRepresentation
from .rational import RationalLike, format_rational, parse_rational, to_fraction
from .verdict import Verdict


def _g(k: int) -> int:
    """Zero-based index of the one-based good ``G_k``."""
    return k - 1


def build_price_regulating_market(n: int) -> Market:
    """Market with 2n unit-supply goods and n buyers of money 3.

    Buyer ``T_i`` values ``G_{2i-1}`` linearly at 2 and ``G_{2i}`` as
    ``[4, 1; 1]``; every other valuation is zero.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    linear2 = PLCRepresentation((2,))
    kinked = PLCRepresentation((4, 1), (1,))
    buyers = [
        Buyer(Fraction(3), {_g(2 * i - 1): linear2, _g(2 * i): kinked}, label=f"T_{i}")
        for i in range(1, n + 1)
    ]
    return Market((Fraction(1),) * (2 * n), tuple(buyers))


@dataclass(frozen=True)
class AuxVector:
    """Per-gadget-buyer supply contribution over goods 1..4n (zero-based list)."""

    s: Tuple[Fraction, ...]
    nonzero: Tuple[int, ...]  # one-based k with C_k != 0


@dataclass(frozen=True)
class GadgetInfo:
    kind: str  # "u" (row player, matrix A) or "v" (column player, matrix B)
    i: int  # one-based
    j: int  # one-based
    buyer: int  # zero-based buyer index in the market
    diff: Tuple[Fraction, ...]  # C
    nnz: int  # m
    total: Fraction  # sum of C
    aux: AuxVector

    def to_json(self) -> dict:
        return {
            "kind": self.kind, "i": self.i, "j": self.j, "buyer": self.buyer,
            "C": [format_rational(c) for c in self.diff], "m": self.nnz, "sumC": format_rational(self.total),
            "s": [format_rational(x) for x in self.aux.s], "I": list(self.aux.nonzero),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GadgetInfo":
        return cls(
            obj["kind"], obj["i"], obj["j"], obj["buyer"],
            tuple(parse_rational(c) for c in obj["C"]), obj["m"], parse_rational(obj["sumC"]),
            AuxVector(tuple(parse_rational(x) for x in obj["s"]), tuple(obj["I"])),
        )


@dataclass(frozen=True)
class ReductionMeta:
    n: int
    regulating_buyers: Tuple[int, ...]  # buyers T_1..T_{2n+1}
    gadgets: Tuple[GadgetInfo, ...]  # all T_u then all T_v

    @property
    def num_goods(self) -> int:
        return 4 * self.n + 2

    @property
    def u_gadgets(self) -> Tuple[GadgetInfo, ...]:
        return tuple(gd for gd in self.gadgets if gd.kind == "u")

    @property
    def v_gadgets(self) -> Tuple[GadgetInfo, ...]:
        return tuple(gd for gd in self.gadgets if gd.kind == "v")

    def pair_goods(self, k: int) -> Tuple[int, int]:
        """Zero-based indices of ``G_{2k-1}, G_{2k}`` for one-based pair k."""
        return _g(2 * k - 1), _g(2 * k)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "regulating_buyers": list(self.regulating_buyers),
            "gadgets": [gd.to_json() for gd in self.gadgets],
            "index_base": "zero-based goods and buyers; good G_k is index k-1",
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReductionMeta":
        return cls(obj["n"], tuple(obj["regulating_buyers"]), tuple(GadgetInfo.from_json(g) for g in obj["gadgets"]))


class ReductionError(ValueError):
    pass


def _gadget(n: int, C: Sequence[Fraction], j: int, own_offset: int, other_offset: int):
    """Valuations, money and auxiliary vector of one gadget buyer.

    ``own_offset`` selects where the C-dependent goods live (pairs
    ``other_offset + k``), ``own_offset + j`` is the pair of strategy j.
    """
    n12 = Fraction(1, n ** 12)
    n13 = Fraction(1, n ** 13)
    nonzero = tuple(k for k in range(1, n + 1) if C[k - 1] != 0)
    m = len(nonzero)
    total = sum(C, Fraction(0))
    money = 3 * n12 + (6 * m + total) * n13
    vals: Dict[int, PLCRepresentation] = {}
    s = [Fraction(0)] * (4 * n)
    for k in nonzero:
        ck = C[k - 1]
        lo, hi = 2 * (other_offset + k) - 1, 2 * (other_offset + k)
        vals[_g(lo)] = PLCRepresentation((81, 1), (2 * n13,))
        kink = (2 + ck) * n13
        # C_k = -2 collapses [81, 1; 0] to the linear function of slope 1
        vals[_g(hi)] = PLCRepresentation((81, 1), (kink,)) if kink > 0 else PLCRepresentation((1,))
        s[_g(lo)] = 2 * n13
        s[_g(hi)] = kink
    lo, hi = 2 * (own_offset + j) - 1, 2 * (own_offset + j)
    vals[_g(lo)] = PLCRepresentation((27, 1), (n12,))
    vals[_g(hi)] = PLCRepresentation((9, 1), (n12,))
    s[_g(lo)] = n12
    s[_g(hi)] = n12
    vals[_g(4 * n + 1)] = PLCRepresentation((3,))
    return money, vals, AuxVector(tuple(s), nonzero), m, total


def build_reduction_market(g: BimatrixGame) -> Tuple[Market, ReductionMeta]:
    n = g.n
    if n < 2:
        raise ReductionError("the reduction needs n >= 2")
    ok = validate_sparse_normalized(g)
    if not ok:
        raise ReductionError(f"game is not sparse and normalized: {ok.reason} {ok.details}")

    buyers: List[Buyer] = []
    shifted = PLCRepresentation((4, 1), (1 + Fraction(1, n ** 20),))
    linear2 = PLCRepresentation((2,))
    for i in range(1, 2 * n + 2):
        buyers.append(Buyer(Fraction(3), {_g(2 * i - 1): linear2, _g(2 * i): shifted}, label=f"T_{i}"))
    regulating = tuple(range(len(buyers)))

    gadgets: List[GadgetInfo] = []
    for kind in ("u", "v"):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                if kind == "u":
                    C = tuple(g.A[i - 1][k] - g.A[j - 1][k] for k in range(n))
                    money, vals, aux, m, total = _gadget(n, C, j, own_offset=0, other_offset=n)
                else:
                    C = tuple(g.B[k][i - 1] - g.B[k][j - 1] for k in range(n))
                    money, vals, aux, m, total = _gadget(n, C, j, own_offset=n, other_offset=0)
                idx = len(buyers)
                buyers.append(Buyer(money, vals, label=f"T_({i},{j},{1 if kind == 'u' else 2})"))
                gadgets.append(GadgetInfo(kind, i, j, idx, C, m, total, aux))

    supplies = [Fraction(1)] * (4 * n + 2)
    for gd in gadgets:
        for k, sk in enumerate(gd.aux.s):
            supplies[k] += sk
    market = Market(tuple(supplies), tuple(buyers))
    return market, ReductionMeta(n, regulating, tuple(gadgets))


# decoding -----------------------------------------------------------------

class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class DecodedProfile:
    raw_x: Tuple[Fraction, ...]
    raw_y: Tuple[Fraction, ...]
    profile: MixedProfile
    clamped: Tuple[Tuple[str, int, Fraction], ...] = ()  # (vector, one-based k, value)

    def to_json(self) -> dict:
        return {
            "raw_x": [format_rational(v) for v in self.raw_x],
            "raw_y": [format_rational(v) for v in self.raw_y],
            "x": [format_rational(v) for v in self.profile.x],
            "y": [format_rational(v) for v in self.profile.y],
            "clamped": [{"vector": v, "k": k, "value": format_rational(x)} for v, k, x in self.clamped],
        }


def default_clamp_tol(n: int) -> Fraction:
    return Fraction(1, n ** 9)


def raw_strategy_values(p: Sequence[Fraction], n: int) -> Tuple[List[Fraction], List[Fraction]]:
    """Unnormalized x', y': ``p_{2k} - (p_{2k-1} + p_{2k}) / 3`` per pair."""
    xr = []
    yr = []
    for k in range(1, n + 1):
        a, b = p[_g(2 * k - 1)], p[_g(2 * k)]
        xr.append(b - (a + b) / 3)
        a, b = p[_g(2 * (n + k) - 1)], p[_g(2 * (n + k))]
        yr.append(b - (a + b) / 3)
    return xr, yr


def decode_prices(p: Sequence[RationalLike], n: int, clamp_tol: Optional[RationalLike] = None) -> DecodedProfile:
    p = [to_fraction(v) for v in p]
    if len(p) != 4 * n + 2:
        raise DecodeError(f"price vector has {len(p)} entries, expected 4n+2 = {4 * n + 2}")
    tol = default_clamp_tol(n) if clamp_tol is None else to_fraction(clamp_tol)
    if tol < 0:
        raise ValueError("clamp_tol must be nonnegative")
    xr, yr = raw_strategy_values(p, n)
    clamped = []
    vecs = {}
    for name, raw in (("x", xr), ("y", yr)):
        fixed = []
        for k, v in enumerate(raw, start=1):
            if v < -tol:
                raise DecodeError(f"{name}'_{k} = {v} is below -clamp_tol = {-tol}")
            if v < 0:
                clamped.append((name, k, v))
                v = Fraction(0)
            fixed.append(v)
        total = sum(fixed, Fraction(0))
        if total == 0:
            raise DecodeError(f"{name}' sums to zero; normalization undefined")
        vecs[name] = tuple(v / total for v in fixed)
    return DecodedProfile(tuple(xr), tuple(yr), MixedProfile(vecs["x"], vecs["y"]), tuple(clamped))


# price-regulation diagnostics ---------------------------------------------

def check_price_regulation(p: Sequence[RationalLike], pairs: int, eps: RationalLike) -> Verdict:
    """Exact check of ``3/(1+eps) <= p_{2k-1}+p_{2k} <= 3/(1-eps)`` and
    ``1/2 <= p_{2k-1}/p_{2k} <= 2`` for pairs k = 1..pairs."""
    p = [to_fraction(v) for v in p]
    eps = to_fraction(eps)
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    if len(p) < 2 * pairs:
        raise ValueError(f"need at least {2 * pairs} prices, got {len(p)}")
    lo_sum, hi_sum = 3 / (1 + eps), 3 / (1 - eps)
    for k in range(1, pairs + 1):
        a, b = p[_g(2 * k - 1)], p[_g(2 * k)]
        s = a + b
        if s < lo_sum:
            return Verdict.no(f"pair {k}: sum {s} < 3/(1+eps) = {lo_sum}", pair=k, bound="sum-lower")
        if s > hi_sum:
            return Verdict.no(f"pair {k}: sum {s} > 3/(1-eps) = {hi_sum}", pair=k, bound="sum-upper")
        if b == 0:
            return Verdict.no(f"pair {k}: p_{2 * k} = 0, ratio undefined", pair=k, bound="ratio")
        r = a / b
        if r < Fraction(1, 2):
            return Verdict.no(f"pair {k}: ratio {r} < 1/2", pair=k, bound="ratio-lower")
        if r > 2:
            return Verdict.no(f"pair {k}: ratio {r} > 2", pair=k, bound="ratio-upper")
    return Verdict.yes()


def regulation_band_diagnostic(
    p: Sequence[RationalLike], n: int, const_lower: RationalLike = 1, const_upper: RationalLike = 1,
) -> Verdict:
    """Heuristic band ``3 - c_lo/n^11 <= p_{2k-1}+p_{2k} <= 3 + c_hi/n^10`` with
    ratio in [1/2, 2] for all 2n+1 pairs of a reduced market.

    The asymptotic constants are unknown; the defaults of 1 are a guess.
    """
    p = [to_fraction(v) for v in p]
    lo = 3 - to_fraction(const_lower) / Fraction(n) ** 11
    hi = 3 + to_fraction(const_upper) / Fraction(n) ** 10
    for k in range(1, 2 * n + 2):
        a, b = p[_g(2 * k - 1)], p[_g(2 * k)]
        s = a + b
        if not lo <= s <= hi:
            return Verdict.no(f"pair {k}: sum {s} outside [{lo}, {hi}]", pair=k, bound="sum")
        if b == 0 or not Fraction(1, 2) <= a / b <= 2:
            return Verdict.no(f"pair {k}: ratio outside [1/2, 2]", pair=k, bound="ratio")
    return Verdict.yes()


def price_spread_diagnostic(p: Sequence[RationalLike], bound: RationalLike = 3) -> Verdict:
    """All pairwise price ratios stay below ``bound``."""
    p = [to_fraction(v) for v in p]
    if min(p) <= 0:
        return Verdict.no("a price is not positive")
    spread = max(p) / min(p)
    if spread >= to_fraction(bound):
        return Verdict.no(f"max/min price ratio {spread} >= {bound}", spread=spread)
    return Verdict.yes(spread=spread)


# round trip ---------------------------------------------------------------

@dataclass
class RoundtripReport:
    certified: bool
    certification: object
    decoded: Optional[DecodedProfile]
    decode_error: Optional[str]
    well_supported: Optional[bool]
    nash_verdict: Optional[Verdict]
    eps_market: Fraction
    eps_nash: Fraction
    violations: List[str] = field(default_factory=list)

    @property
    def implication_holds(self) -> bool:
        """The tested implication: certified implies well-supported."""
        return (not self.certified) or bool(self.well_supported)

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "certification": self.certification.to_json(),
            "decoded": None if self.decoded is None else self.decoded.to_json(),
            "decode_error": self.decode_error,
            "well_supported": self.well_supported,
            "nash_reason": None if self.nash_verdict is None else self.nash_verdict.reason,
            "eps_market": format_rational(self.eps_market),
            "eps_nash": format_rational(self.eps_nash),
            "violations": self.violations,
        }


def roundtrip_check(
    g: BimatrixGame,
    p: Sequence[RationalLike],
    eps_market: Optional[RationalLike] = None,
    eps_nash: Optional[RationalLike] = None,
    clamp_tol: Optional[RationalLike] = None,
    market: Optional[Market] = None,
) -> RoundtripReport:
    n = g.n
    eps_m = Fraction(1, n ** 21) if eps_market is None else to_fraction(eps_market)
    eps_n = Fraction(1, n ** 6) if eps_nash is None else to_fraction(eps_nash)
    if market is None:
        market, _ = build_reduction_market(g)
    cert = certify_equilibrium(market, p, eps_m)
    decoded = None
    decode_error = None
    verdict = None
    violations = []
    try:
        decoded = decode_prices(p, n, clamp_tol)
    except DecodeError as exc:
        decode_error = str(exc)
        violations.append(f"decode: {exc}")
    if decoded is not None:
        verdict = check_well_supported(g, decoded.profile, eps_n)
        if not verdict:
            violations.append(f"nash: {verdict.reason}")
    if not cert:
        violations.append(f"certify: {cert.message}")
    well = None if decoded is None else bool(verdict)
    if decoded is None and cert:
        well = False
    return RoundtripReport(bool(cert), cert, decoded, decode_error, well, verdict, eps_m, eps_n, violations)
