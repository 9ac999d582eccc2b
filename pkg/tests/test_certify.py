from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from fisherplc.certify import Certificate, Refutation, certify_equilibrium, check_allocation
from fisherplc.market import Buyer, Market
from fisherplc.plc import PLCRepresentation
from fisherplc.reduction import build_price_regulating_market

from randgen import planted_market, seeded

M1 = build_price_regulating_market(1)


def test_m1_exact():
    cert = certify_equilibrium(M1, [1, 2], 0)
    assert isinstance(cert, Certificate)
    assert cert.witness == ((1, 1),) and cert.clears_exactly


def test_m1_over_demand():
    ref = certify_equilibrium(M1, [1, 1], F(1, 100))
    assert isinstance(ref, Refutation)
    assert ref.kind == "over-demanded" and ref.good == 0 and ref.details["demanded"] == "2/1"


def test_m1_heavy_over_demand():
    ref = certify_equilibrium(M1, [F(5, 2), F(1, 2)], F(1, 100))
    assert ref.kind == "over-demanded" and ref.good == 1 and ref.details["demanded"] == "6/1"


def test_m4_exact():
    assert certify_equilibrium(build_price_regulating_market(4), [1, 2] * 4, 0)


def test_unbounded_demand():
    ref = certify_equilibrium(M1, [0, 1], 0)
    assert ref.kind == "unbounded-demand"


def test_under_demand():
    m = Market([1, 1], [Buyer(3, {0: PLCRepresentation((1,))})])
    ref = certify_equilibrium(m, [3, 1], 0)
    assert ref.kind == "under-demanded" and ref.good == 1


def test_exact_mode_needs_exact_clearing():
    m = Market([1], [Buyer(3, {0: PLCRepresentation((1,))})])
    assert certify_equilibrium(m, [3], 0, exact=True)
    assert not certify_equilibrium(m, [F(301, 100)], 0, exact=True)
    assert certify_equilibrium(m, [F(301, 100)], F(1, 100))


def test_satiated_buyer_disposes_money():
    m = Market([1, 1], [Buyer(5, {0: PLCRepresentation((2, 0), (1,))}), Buyer(1, {1: PLCRepresentation((1,))})])
    cert = certify_equilibrium(m, [1, 1], 0)
    assert cert and cert.witness[0][0] == 1


def test_zero_price_good_absorbed():
    m = Market([1, 1], [Buyer(3, {0: PLCRepresentation((1,))})])
    cert = certify_equilibrium(m, [3, 0], F(1, 10))
    assert cert and sum(r[1] for r in cert.witness) == 1


def test_check_allocation_examples():
    assert check_allocation(M1, [1, 2], [[1, 1]])
    v = check_allocation(M1, [1, 2], [[3, 0]])
    assert not v
    kinds = [(x["good"], x["reason"]) for x in v.details["violations"]]
    assert kinds == [(1, "over-demanded"), (2, "under-demanded")]
    assert not check_allocation(M1, [1, 2], [[F(101, 100), F(101, 100)]], F(1, 100))


@given(st.integers(0, 10 ** 9), st.sampled_from([F(0), F(1, 20), F(1, 10)]), st.sampled_from([F(1, 10), F(1, 4)]))
def test_soundness_and_monotone_eps(seed, eps, bump):
    m, p = planted_market(seeded(seed), eps)
    res = certify_equilibrium(m, p, eps)
    if res:
        assert check_allocation(m, p, res.witness, eps)
        assert certify_equilibrium(m, p, eps + bump)


@given(st.integers(0, 10 ** 9), st.sampled_from([F(0), F(1, 10)]))
def test_unwanted_free_good_changes_nothing(seed, eps):
    m, p = planted_market(seeded(seed), eps)
    wider = Market(tuple(m.supplies) + (F(1),), m.buyers)
    assert bool(certify_equilibrium(m, p, eps)) == bool(certify_equilibrium(wider, list(p) + [F(0)], eps))
