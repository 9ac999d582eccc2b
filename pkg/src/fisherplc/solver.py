"""Desk-scale tatonnement search for approximate equilibrium prices.

There is no convergence guarantee; the loop simply stops at the first price
vector that certifies. Iterates are advanced in double precision by the
compiled kernel (``arithmetic="float"``, the default) or in exact rationals
(``arithmetic="exact"``); in both modes every certification runs on an exact
candidate obtained by continued-fraction rounding, so rounding can cost
convergence but never soundness.
"""
from __future__ import annotations

import csv
import hashlib
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .certify import Certificate, certify_equilibrium
from .demand import UnboundedDemand, canonical_bundle, compute_demand
from .market import Market, as_prices, validate_market
from .rational import RationalLike, to_fraction

logger = logging.getLogger(__name__)


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    step: Fraction = Fraction(1, 4)
    max_iterations: int = 10_000
    eps: Fraction = Fraction(1, 100)
    initial: Union[str, Tuple[Fraction, ...]] = "uniform"
    damping: str = "fixed"  # or "halving"
    price_floor: Fraction = Fraction(1, 2 ** 40)
    denominator_bound: int = 2 ** 32
    check_interval: int = 32
    arithmetic: str = "float"  # or "exact"
    seed: int = 0
    max_restarts: int = 8

    def __post_init__(self):
        object.__setattr__(self, "step", to_fraction(self.step))
        object.__setattr__(self, "eps", to_fraction(self.eps))
        object.__setattr__(self, "price_floor", to_fraction(self.price_floor))
        if not 0 < self.step < 1:
            raise ValueError("step must lie in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        if self.price_floor <= 0:
            raise ValueError("price_floor must be positive")
        if self.damping not in ("fixed", "halving"):
            raise ValueError(f"unknown damping schedule {self.damping!r}")
        if self.arithmetic not in ("float", "exact"):
            raise ValueError(f"unknown arithmetic {self.arithmetic!r}")
        if self.check_interval < 1 or self.denominator_bound < 1:
            raise ValueError("check_interval and denominator_bound must be positive")
        if not isinstance(self.initial, str):
            object.__setattr__(self, "initial", tuple(to_fraction(v) for v in self.initial))
        elif self.initial != "uniform":
            raise ValueError("initial must be 'uniform' or a price vector")


@dataclass
class SolverReport:
    outcome: str  # "certified" | "exhausted"
    prices: Tuple[Fraction, ...]  # certified prices, or the best candidate seen
    certificate: Optional[Certificate]
    best_residual: float
    iterations: int
    restarts: int
    trace: List[float] = field(default_factory=list)
    checkpoints: List[Tuple[int, str, bool]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.outcome == "certified"

    def write_trace_csv(self, path) -> None:
        marks = {it: h for it, h, _ in self.checkpoints}
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "max_relative_excess", "price_hash"])
            for it, v in enumerate(self.trace, start=1):
                w.writerow([it, repr(v), marks.get(it, "")])


def price_hash(p: Sequence[Fraction]) -> str:
    text = ",".join(f"{v.numerator}/{v.denominator}" for v in p)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def round_prices(p_float: Sequence[float], bound: int, floor: Fraction) -> Tuple[Fraction, ...]:
    return tuple(max(floor, Fraction(float(x)).limit_denominator(bound)) for x in p_float)


def _initial_prices(m: Market, cfg: SolverConfig) -> Tuple[Fraction, ...]:
    if cfg.initial == "uniform":
        level = sum(b.money for b in m.buyers) / sum(m.supplies)
        return (level,) * m.num_goods
    return as_prices(cfg.initial, m.num_goods)


def _max_rel_excess_exact(m: Market, p: Sequence[Fraction]) -> Tuple[List[Fraction], Fraction]:
    demand = [Fraction(0)] * m.num_goods
    for i in range(m.num_buyers):
        bundle = canonical_bundle(compute_demand(m, i, p), p, m.num_goods)
        for j, x in enumerate(bundle):
            demand[j] += x
    z = [d - c for d, c in zip(demand, m.supplies)]
    return z, max(abs(zj) / c for zj, c in zip(z, m.supplies))


def tatonnement(m: Market, cfg: SolverConfig = SolverConfig()) -> SolverReport:
    if not validate_market(m, alpha=10 ** 18, t=m.num_goods, max_segments=10 ** 9).maxfield:
        raise SolverError("market violates the Maxfield condition; no equilibrium is guaranteed")
    if cfg.arithmetic == "exact":
        return _tatonnement_exact(m, cfg)
    return _tatonnement_float(m, cfg)


def _certify_candidate(m, cand, cfg, report_state):
    cert = certify_equilibrium(m, cand, cfg.eps)
    if not cert:
        return None
    # never trust the loop's state: certify again from scratch
    again = certify_equilibrium(m, cand, cfg.eps)
    if not again:
        raise AssertionError("re-certification disagreed")
    return again


def _tatonnement_float(m: Market, cfg: SolverConfig) -> SolverReport:
    supply, money, seg_ptr, seg_good, seg_len, seg_slope = kernels.pack_market(m)
    rng = np.random.default_rng(cfg.seed)
    prices = np.array([float(v) for v in _initial_prices(m, cfg)], dtype=np.float64)
    floor = float(cfg.price_floor)
    step = float(cfg.step)
    two_eps = 2 * float(cfg.eps)
    trace: List[float] = []
    checkpoints = []
    buf = np.zeros(max(cfg.check_interval, 1), dtype=np.float64)
    it = 0
    restarts = 0
    best = (math.inf, None)
    last_worst = math.inf
    while it < cfg.max_iterations:
        close = last_worst < two_eps
        chunk = 1 if close else min(cfg.check_interval, cfg.max_iterations - it)
        before = prices.copy()
        done, worst = kernels.backend.tatonnement_chunk(
            prices, supply, money, seg_ptr, seg_good, seg_len, seg_slope,
            step, floor, chunk, buf, -1.0 if close else two_eps,
        )
        trace.extend(float(v) for v in buf[:done])
        it += done
        if not np.all(np.isfinite(prices)) or not math.isfinite(worst):
            if restarts >= cfg.max_restarts:
                break
            restarts += 1
            prices = before * rng.uniform(0.5, 1.5, size=len(prices))
            np.nan_to_num(prices, copy=False, nan=1.0, posinf=1.0)
            last_worst = math.inf
            continue
        if cfg.damping == "halving" and worst > last_worst and not close:
            step = max(step / 2, float(cfg.step) / 2 ** 20)
        last_worst = worst
        cand = round_prices(prices, cfg.denominator_bound, cfg.price_floor)
        if worst < best[0]:
            best = (worst, cand)
        cert = _certify_candidate(m, cand, cfg, None)
        checkpoints.append((it, price_hash(cand), cert is not None))
        if cert is not None:
            return SolverReport("certified", cand, cert, worst, it, restarts, trace, checkpoints)
    best_p = best[1] if best[1] is not None else round_prices(prices, cfg.denominator_bound, cfg.price_floor)
    return SolverReport("exhausted", best_p, None, best[0], it, restarts, trace, checkpoints)


def _rounding_ladder(p: Sequence[Fraction], cfg: SolverConfig) -> List[Tuple[Fraction, ...]]:
    out = [tuple(p)]
    for bound in (2 ** 8, 2 ** 16):
        cand = tuple(max(cfg.price_floor, v.limit_denominator(bound)) for v in p)
        if cand not in out:
            out.append(cand)
    return out


def _tatonnement_exact(m: Market, cfg: SolverConfig) -> SolverReport:
    p = list(_initial_prices(m, cfg))
    step = cfg.step
    trace: List[float] = []
    checkpoints = []
    best = (math.inf, None)
    last_worst = None
    it = 0
    restarts = 0
    rng = np.random.default_rng(cfg.seed)
    since_check = 0
    while it < cfg.max_iterations:
        try:
            z, worst = _max_rel_excess_exact(m, p)
        except UnboundedDemand:
            if restarts >= cfg.max_restarts:
                break
            restarts += 1
            p = [max(cfg.price_floor, v * Fraction(int(rng.integers(50, 150)), 100)) for v in p]
            it += 1
            continue
        trace.append(float(worst))
        since_check += 1
        if worst < 2 * cfg.eps or since_check >= cfg.check_interval:
            since_check = 0
            if float(worst) < best[0]:
                best = (float(worst), tuple(p))
            # the iterate itself, then coarser roundings that can land on a kink exactly
            for cand in _rounding_ladder(p, cfg):
                cert = _certify_candidate(m, cand, cfg, None)
                checkpoints.append((it + 1, price_hash(cand), cert is not None))
                if cert is not None:
                    return SolverReport("certified", cand, cert, float(worst), it + 1, restarts, trace, checkpoints)
        if cfg.damping == "halving" and last_worst is not None and worst > last_worst:
            step = step / 2
        last_worst = worst
        p = [
            max(cfg.price_floor, (pj * (1 + step * zj / c)).limit_denominator(cfg.denominator_bound))
            for pj, zj, c in zip(p, z, m.supplies)
        ]
        it += 1
    best_p = best[1] if best[1] is not None else tuple(p)
    return SolverReport("exhausted", best_p, None, best[0], it, restarts, trace, checkpoints)
