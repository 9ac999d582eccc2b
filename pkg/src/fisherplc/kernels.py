"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting the environment
variable ``FISHERPLC_PURE_PYTHON=1`` forces the numpy/pure-Python fallback.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import reduce
from typing import Mapping, Sequence, Tuple

import numpy as np

from . import _kernels_py as pure
from .market import Market
from .plc import PLCRepresentation, segments

compiled = None
if os.environ.get("FISHERPLC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled = None

backend = compiled if compiled is not None else pure
BACKEND = "compiled" if compiled is not None else "python"

INT64_SAFE = 2 ** 62


def pack_market(m: Market):
    """Float arrays describing ``m``'s positive-slope segments, grouped by buyer."""
    seg_ptr = [0]
    goods, lens, slopes = [], [], []
    for b in m.buyers:
        for j, rep in b.valuations.items():
            for seg in segments(rep):
                if seg.slope > 0:
                    goods.append(j)
                    lens.append(math.inf if not isinstance(seg.length, Fraction) else float(seg.length))
                    slopes.append(float(seg.slope))
        seg_ptr.append(len(goods))
    return (
        np.array([float(c) for c in m.supplies], dtype=np.float64),
        np.array([float(b.money) for b in m.buyers], dtype=np.float64),
        np.array(seg_ptr, dtype=np.int64),
        np.array(goods, dtype=np.int64),
        np.array(lens, dtype=np.float64),
        np.array(slopes, dtype=np.float64),
    )


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


class LatticeUtility:
    """Exact utilities of bundles on the lattice ``(1/denominator) Z^g``.

    ``values(points)`` returns integers equal to ``factor * u(points / denominator)``.
    """

    def __init__(self, valuations: Mapping[int, PLCRepresentation], num_goods: int, denominator: int):
        self.num_goods = num_goods
        self.denominator = denominator
        per_good = [segments(valuations[j]) if j in valuations else [] for j in range(num_goods)]
        S = max((len(s) for s in per_good), default=1) or 1
        slope_den = _lcm(seg.slope.denominator for segs in per_good for seg in segs)
        Q = [
            _lcm([denominator] + [seg.start.denominator for seg in segs])
            for segs in per_good
        ]
        L = _lcm(Q)
        self.factor = slope_den * L
        starts = np.zeros((num_goods, S), dtype=object)
        lengths = np.full((num_goods, S), -1, dtype=object)
        slopes = np.zeros((num_goods, S), dtype=object)
        scale = np.zeros(num_goods, dtype=object)
        for g, segs in enumerate(per_good):
            scale[g] = Q[g] // denominator
            for s, seg in enumerate(segs):
                starts[g, s] = int(seg.start * Q[g])
                if isinstance(seg.length, Fraction):
                    lengths[g, s] = int(seg.length * Q[g])
                slopes[g, s] = int(seg.slope * slope_den * (L // Q[g]))
        self._tables = (starts, lengths, slopes, scale)

    def values(self, points: np.ndarray):
        starts, lengths, slopes, scale = self._tables
        points = np.asarray(points)
        max_k = int(points.max()) if points.size else 0
        bound = sum(int(sl) for sl in slopes.ravel()) * max(1, max_k) * max(int(s) for s in scale) if len(scale) else 0
        if bound < INT64_SAFE:
            return backend.lattice_utilities(
                np.ascontiguousarray(points, dtype=np.int64),
                starts.astype(np.int64), lengths.astype(np.int64), slopes.astype(np.int64),
                scale.astype(np.int64),
            )
        # big numbers: exact Python integers through the fallback
        x = points.astype(object) * scale[None, :]
        d = x[:, :, None] - starts[None, :, :]
        d = np.where(d > 0, d, 0)
        d = np.where(lengths[None, :, :] >= 0, np.minimum(d, lengths[None, :, :]), d)
        return (d * slopes[None, :, :]).sum(axis=(1, 2))

    def utility(self, point: Sequence[int]) -> Fraction:
        return Fraction(int(self.values(np.array([point]))[0]), self.factor)
