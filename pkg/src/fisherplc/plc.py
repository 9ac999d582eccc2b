"""Piecewise-linear concave single-good valuations.

A valuation is stored as its representation ``[s0, s1, ..., st; b1, ..., bt]``:
slope ``s0`` on ``[0, b1]``, slope ``s1`` on ``[b1, b2]``, ... and a ray of
slope ``st`` from ``bt`` on. ``r(0) = 0`` always. The zero function is ``[0]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .rational import INF, RationalLike, format_rational, parse_rational, to_fraction


class Segment(NamedTuple):
    start: Fraction
    length: object  # Fraction or INF
    slope: Fraction


@dataclass(frozen=True)
class PLCFlags:
    is_zero: bool
    strictly_monotone: bool
    alpha_bounded: bool
    segment_count: int


@dataclass(frozen=True)
class PLCRepresentation:
    slopes: tuple
    breakpoints: tuple = ()

    def __init__(self, slopes: Iterable[RationalLike], breakpoints: Iterable[RationalLike] = ()):
        object.__setattr__(self, "slopes", tuple(to_fraction(s) for s in slopes))
        object.__setattr__(self, "breakpoints", tuple(to_fraction(b) for b in breakpoints))

    @classmethod
    def linear(cls, slope: RationalLike) -> "PLCRepresentation":
        return cls((slope,))

    @classmethod
    def zero(cls) -> "PLCRepresentation":
        return ZERO

    @classmethod
    def parse(cls, text: str) -> "PLCRepresentation":
        """Read the bracket notation, e.g. ``"[4, 1; 1]"`` or ``"[2]"``."""
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"expected '[slopes; breakpoints]', got {text!r}")
        body = body[1:-1]
        slope_part, _, bp_part = body.partition(";")
        slopes = [parse_rational(s) for s in re.split(r",", slope_part) if s.strip()]
        bps = [parse_rational(s) for s in re.split(r",", bp_part) if s.strip()]
        return cls(slopes, bps)

    @property
    def is_zero(self) -> bool:
        return len(self.slopes) == 1 and self.slopes[0] == 0

    def __str__(self) -> str:
        s = ", ".join(_short(x) for x in self.slopes)
        if self.breakpoints:
            return "[" + s + "; " + ", ".join(_short(x) for x in self.breakpoints) + "]"
        return "[" + s + "]"

    def to_json(self) -> dict:
        return {
            "slopes": [format_rational(s) for s in self.slopes],
            "breakpoints": [format_rational(b) for b in self.breakpoints],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PLCRepresentation":
        return cls(
            [parse_rational(s) for s in obj["slopes"]],
            [parse_rational(b) for b in obj.get("breakpoints", [])],
        )


def _short(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


ZERO = PLCRepresentation((0,))


def validate_plc(rep: PLCRepresentation) -> Optional[str]:
    """Return ``None`` if ``rep`` is a valid representation, else the first violation."""
    slopes, bps = rep.slopes, rep.breakpoints
    if len(slopes) == 0:
        return "no slopes"
    if len(slopes) != len(bps) + 1:
        return f"slope count {len(slopes)} != breakpoint count {len(bps)} + 1"
    for v in slopes + bps:
        if not isinstance(v, Fraction):
            return f"non-rational value {v!r}"
    for i in range(1, len(slopes)):
        if not slopes[i - 1] > slopes[i]:
            return f"slopes not strictly decreasing at index {i}: {slopes[i - 1]} <= {slopes[i]}"
    if slopes[-1] < 0:
        return f"final slope {slopes[-1]} is negative"
    if bps and bps[0] <= 0:
        return f"breakpoint {bps[0]} is not positive"
    for i in range(1, len(bps)):
        if not bps[i - 1] < bps[i]:
            return f"breakpoints not strictly increasing at index {i}: {bps[i - 1]} >= {bps[i]}"
    return None


def require_valid(rep: PLCRepresentation) -> PLCRepresentation:
    problem = validate_plc(rep)
    if problem is not None:
        raise ValueError(f"invalid PLC representation {rep}: {problem}")
    return rep


def evaluate(rep: PLCRepresentation, x: RationalLike) -> Fraction:
    x = to_fraction(x)
    if x < 0:
        raise ValueError(f"PLC functions are defined on x >= 0, got {x}")
    total = Fraction(0)
    prev = Fraction(0)
    for slope, bp in zip(rep.slopes, rep.breakpoints):
        if x <= bp:
            return total + slope * (x - prev)
        total += slope * (bp - prev)
        prev = bp
    return total + rep.slopes[-1] * (x - prev)


def segments(rep: PLCRepresentation) -> list:
    out = []
    prev = Fraction(0)
    for slope, bp in zip(rep.slopes, rep.breakpoints):
        out.append(Segment(prev, bp - prev, slope))
        prev = bp
    out.append(Segment(prev, INF, rep.slopes[-1]))
    return out


def classify(rep: PLCRepresentation, alpha: RationalLike) -> PLCFlags:
    alpha = to_fraction(alpha)
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    zero = rep.is_zero
    return PLCFlags(
        is_zero=zero,
        strictly_monotone=rep.slopes[-1] > 0,
        alpha_bounded=(not zero) and rep.slopes[0] <= alpha and rep.slopes[-1] >= 1,
        segment_count=len(rep.slopes),
    )


def satiation_point(rep: PLCRepresentation):
    """Smallest x beyond which the marginal value is zero (INF if never)."""
    if rep.slopes[-1] > 0:
        return INF
    if not rep.breakpoints:
        return Fraction(0)
    return rep.breakpoints[-1]


def max_slope(reps: Sequence[PLCRepresentation]) -> Fraction:
    return max((r.slopes[0] for r in reps), default=Fraction(0))
