import csv
from fractions import Fraction as F

import pytest

from fisherplc.market import Buyer, Market
from fisherplc.plc import PLCRepresentation
from fisherplc.reduction import build_price_regulating_market, check_price_regulation
from fisherplc.solver import SolverConfig, SolverError, price_hash, round_prices, tatonnement

M1 = build_price_regulating_market(1)


@pytest.mark.parametrize("arithmetic", ["float", "exact"])
def test_m1_from_equal_prices(arithmetic):
    rep = tatonnement(M1, SolverConfig(initial=(F(3, 2), F(3, 2)), arithmetic=arithmetic))
    assert rep.certified and rep.outcome == "certified"
    assert check_price_regulation(rep.prices, 1, rep.certificate.eps)


@pytest.mark.parametrize("arithmetic", ["float", "exact"])
def test_single_good_finds_clearing_price(arithmetic):
    m = Market([1], [Buyer(3, {0: PLCRepresentation((1,))})])
    rep = tatonnement(m, SolverConfig(eps=F(0), initial=(F(1),), arithmetic=arithmetic, max_iterations=2000))
    assert rep.certified and rep.prices == (3,)


def test_maxfield_violation_refused():
    m = Market([1], [Buyer(1, {0: PLCRepresentation((0,))})])
    with pytest.raises(SolverError):
        tatonnement(m)


def test_config_validation():
    for bad in (dict(step=F(0)), dict(step=F(1)), dict(max_iterations=0), dict(eps=F(-1)),
                dict(price_floor=F(0)), dict(damping="cosine"), dict(arithmetic="decimal")):
        with pytest.raises(ValueError):
            SolverConfig(**bad)


def test_deterministic_and_positive():
    m = build_price_regulating_market(3)
    cfg = SolverConfig(initial=tuple(F(k, 2) for k in range(1, 7)), eps=F(1, 1000), max_iterations=3000)
    a, b = tatonnement(m, cfg), tatonnement(m, cfg)
    assert (a.prices, a.iterations, a.checkpoints, a.trace) == (b.prices, b.iterations, b.checkpoints, b.trace)
    assert all(p > 0 for p in a.prices)


def test_exhausted_reports_best_candidate():
    m = build_price_regulating_market(2)
    rep = tatonnement(m, SolverConfig(initial=(F(1), F(5), F(5), F(1)), eps=F(0), max_iterations=40, damping="halving"))
    assert rep.outcome == "exhausted" and not rep.certified and rep.iterations == 40
    assert len(rep.prices) == 4 and rep.best_residual >= 0


def test_trace_csv(tmp_path):
    rep = tatonnement(M1, SolverConfig(initial=(F(1), F(5)), max_iterations=200))
    path = tmp_path / "trace.csv"
    rep.write_trace_csv(path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["iteration", "max_relative_excess", "price_hash"]
    assert len(rows) == len(rep.trace) + 1


def test_rounding_and_hash():
    p = round_prices([0.5, 1e-30], 2 ** 10, F(1, 2 ** 40))
    assert p == (F(1, 2), F(1, 2 ** 40))
    assert price_hash(p) == price_hash((F(1, 2), F(1, 2 ** 40))) != price_hash((F(1), F(1)))
