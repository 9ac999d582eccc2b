from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from fisherplc.certify import certify_equilibrium
from fisherplc.games import BimatrixGame
from fisherplc.market import validate_market
from fisherplc.plc import PLCRepresentation
from fisherplc.reduction import (
    DecodeError, ReductionError, build_price_regulating_market, build_reduction_market, check_price_regulation,
    decode_prices, regulation_band_diagnostic, price_spread_diagnostic, roundtrip_check,
)

from randgen import random_sparse_game, seeded

ID2 = BimatrixGame([[1, 0], [0, 1]], [[0, 1], [1, 0]])


def test_mn_shape():
    m = build_price_regulating_market(1)
    assert m.supplies == (1, 1) and m.num_buyers == 1
    b = m.buyers[0]
    assert b.money == 3 and b.valuations == {0: PLCRepresentation((2,)), 1: PLCRepresentation((4, 1), (1,))}
    assert set(build_price_regulating_market(3).buyers[1].valuations) == {2, 3}
    for n in (1, 2, 5):
        assert validate_market(build_price_regulating_market(n), 4, 2, 2).all_ok


def test_mn_rejects_bad_n():
    with pytest.raises(ValueError):
        build_price_regulating_market(0)


def test_reduced_counts_and_gadget_money():
    m, meta = build_reduction_market(ID2)
    assert m.num_goods == 10 and m.num_buyers == 9
    assert len(meta.u_gadgets) == 2 and len(meta.v_gadgets) == 2
    u = next(gd for gd in meta.u_gadgets if (gd.i, gd.j) == (1, 2))
    assert u.diff == (1, -1) and u.nnz == 2 and u.total == 0
    assert m.buyers[u.buyer].money == F(9, 4096)
    s = u.aux.s
    expected = [0, 0, F(1, 4096), F(1, 4096), F(2, 8192), F(3, 8192), F(2, 8192), F(1, 8192)]
    assert list(s) == expected


def test_reduced_shifted_breakpoint():
    m, meta = build_reduction_market(ID2)
    rep = m.buyers[0].valuations[1]
    assert rep.breakpoints == (1 + F(1, 2 ** 20),)


def test_kink_collapses_when_difference_is_minus_two():
    g = BimatrixGame([[-1, 0], [1, 0]], [[0, 0], [0, 0]])
    m, meta = build_reduction_market(g)
    u = next(gd for gd in meta.u_gadgets if (gd.i, gd.j) == (1, 2))
    assert u.diff[0] == -2
    assert m.buyers[u.buyer].valuations[5] == PLCRepresentation((1,))
    assert validate_market(m, 81, 43, 2).all_ok


def test_reduction_preconditions():
    with pytest.raises(ReductionError):
        build_reduction_market(BimatrixGame([[1]], [[1]]))
    with pytest.raises(ReductionError):
        build_reduction_market(BimatrixGame([[2, 0], [0, 0]], [[0, 0], [0, 0]]))


@given(st.integers(0, 10 ** 9))
def test_reduced_invariants(seed):
    rng = seeded(seed)
    n = rng.randint(2, 4)
    m, meta = build_reduction_market(random_sparse_game(rng, n))
    assert m.num_buyers == 2 * n + 1 + 2 * n * (n - 1)
    assert all(m.buyers[gd.buyer].money > 0 for gd in meta.gadgets)
    assert all(len(b.valuations) <= 43 for b in m.buyers)


def test_decode_examples():
    d = decode_prices([1, 2, 2, 1, 1, 2, 2, 1, 5, 7], 2)
    assert d.raw_x == (1, 0) and d.raw_y == (1, 0)
    assert d.profile.x == (1, 0) and d.profile.y == (1, 0)
    with pytest.raises(DecodeError):
        decode_prices([2, 1] * 4 + [1, 1], 2)
    d = decode_prices([1, 2 - F(1, 8)] + [1, 2] * 3 + [1, 1], 2)
    assert d.raw_x[0] == F(11, 12)


def test_decode_clamps_small_negatives():
    tiny = F(1, 2 ** 12)
    p = [1 + tiny, 2 - tiny] + [2 + 3 * tiny, 1 - 3 * tiny] + [1, 2, 1, 2, 1, 1]
    d = decode_prices(p, 2)
    assert d.profile.x == (1, 0) and d.clamped == (("x", 2, -3 * tiny),)
    with pytest.raises(DecodeError):
        decode_prices(p, 2, clamp_tol=tiny)
    with pytest.raises(DecodeError):
        decode_prices([1, 2], 2)


def test_price_regulation_examples():
    assert check_price_regulation([1, 2], 1, F(1, 10))
    v = check_price_regulation([F(11, 5), F(4, 5)], 1, F(1, 10))
    assert not v and v.details["bound"] == "ratio-upper"
    v = check_price_regulation([F(7, 5), F(7, 5)], 1, F(1, 100))
    assert not v and v.details["bound"] == "sum-lower"


@given(st.integers(1, 4), st.integers(0, 10 ** 9))
def test_certified_mn_prices_are_regulated(n, seed):
    rng = seeded(seed)
    m = build_price_regulating_market(n)
    eps = F(1, rng.choice((10, 100)))
    p = [F(rng.randint(50, 250), 100) for _ in range(2 * n)]
    if certify_equilibrium(m, p, eps):
        assert check_price_regulation(p, n, eps)


def test_diagnostics():
    assert regulation_band_diagnostic([1, 2] * 5, 2)
    assert not regulation_band_diagnostic([1, 2] * 4 + [1, 1], 2)
    assert price_spread_diagnostic([1, 2, F(5, 2)])
    assert not price_spread_diagnostic([1, 2, 3])


def test_roundtrip_uncertified_still_decodes():
    rep = roundtrip_check(ID2, [1, 2] * 4 + [1, 1])
    assert not rep.certified and rep.decoded is not None and rep.implication_holds


def test_roundtrip_decode_error_reported():
    rep = roundtrip_check(ID2, [2, 1] * 4 + [1, 1])
    assert not rep.certified and rep.decode_error and rep.implication_holds
