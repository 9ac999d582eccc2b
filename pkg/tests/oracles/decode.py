"""Straight-line decoding of strategy vectors from reduced-market prices."""
from fractions import Fraction


def decode(p, n, tol):
    raw_x = []
    raw_y = []
    for k in range(1, n + 1):
        lo, hi = p[2 * k - 2], p[2 * k - 1]
        raw_x.append(hi - (lo + hi) / 3)
    for k in range(1, n + 1):
        lo, hi = p[2 * (n + k) - 2], p[2 * (n + k) - 1]
        raw_y.append(hi - (lo + hi) / 3)
    out = []
    for raw in (raw_x, raw_y):
        vals = []
        for v in raw:
            if v < -tol:
                return None
            vals.append(max(v, Fraction(0)))
        total = sum(vals)
        if total == 0:
            return None
        out.append([v / total for v in vals])
    return raw_x, raw_y, out[0], out[1]
