"""Exact rational helpers shared by every module.

Rationals cross file and CLI boundaries only as ``"numerator/denominator"``
strings; floats are rejected so no precision can leak in silently.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

RationalLike = Union[Fraction, int, str]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class _Infinity:
    """Symbolic +infinity used for unbounded segment lengths and capacities."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("fisherplc-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()


def is_inf(x) -> bool:
    return x is INF


def to_fraction(value: RationalLike) -> Fraction:
    """Convert ``value`` to a Fraction without ever passing through a float."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimal notation is refused."""
    m = _RAT_RE.match(text.replace("−", "-"))
    if m is None:
        raise ValueError(f"not an exact rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Canonical ``"p/q"`` form: gcd-reduced, positive denominator."""
    value = to_fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_extended(value) -> str:
    """Like :func:`format_rational` but accepts :data:`INF`."""
    return "inf" if value is INF else format_rational(value)


def parse_extended(text: str):
    if text.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return parse_rational(text)
