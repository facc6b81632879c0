# test_arith.py — Exact Arithmetic Tests
"""
Tests for Sqrt2Scalar (exact Z[1/√2]) and the extended integers with
parity-tagged minus infinity.

Usage:
    pytest test_arith.py
"""

from fractions import Fraction

import pytest

from src.extint import (
    NEG_INF, NEG_INF_EV, NEG_INF_ODD, IncomparableError, ext_from_json, ext_max, ext_to_json,
    is_finite, parity,
)
from src.sqrt2 import INV_SQRT2, ONE, ZERO, Sqrt2Scalar


# ─── Sqrt2Scalar ───

def test_normal_form_reduces_powers_of_two():
    x = Sqrt2Scalar(4, 2, 2)
    assert x.triple() == (2, 1, 1), f"WRONG normal form: {x.triple()}"
    assert Sqrt2Scalar(0, 0, 5).triple() == (0, 0, 0)


def test_inverse_sqrt2_squares_to_half():
    half = INV_SQRT2 * INV_SQRT2
    assert half == Sqrt2Scalar.from_fraction(Fraction(1, 2)), f"WRONG (1/√2)^2: {half}"
    assert INV_SQRT2.norm_squared() == Fraction(1, 2)


def test_sqrt2_power():
    assert Sqrt2Scalar.sqrt2_power(0) == ONE
    assert Sqrt2Scalar.sqrt2_power(2) == Sqrt2Scalar.from_int(2)
    assert Sqrt2Scalar.sqrt2_power(3) == Sqrt2Scalar(0, 2, 0)
    assert Sqrt2Scalar.sqrt2_power(-1) == INV_SQRT2
    assert Sqrt2Scalar.sqrt2_power(-1) * Sqrt2Scalar.sqrt2_power(1) == ONE


def test_ring_operations_with_ints():
    x = Sqrt2Scalar(1, 1, 0)
    assert x + 1 == Sqrt2Scalar(2, 1, 0)
    assert 1 - x == Sqrt2Scalar(0, -1, 0)
    assert x * x == Sqrt2Scalar(3, 2, 0), f"WRONG (1+√2)^2: {x * x}"
    assert x * x.conj() == Sqrt2Scalar.from_int(-1)


def test_integer_scalars_hash_like_ints():
    assert ONE == 1 and hash(ONE) == hash(1)
    assert {Sqrt2Scalar.from_int(3): 'x'}[3] == 'x'
    assert {0: 'zero'}[ZERO] == 'zero'
    assert len({ONE, 1, Sqrt2Scalar(2, 0, 1)}) == 1


def test_sign_and_order():
    assert Sqrt2Scalar(3, -2, 0).sign() == 1     # 3 > 2√2
    assert Sqrt2Scalar(2, -2, 0).sign() == -1    # 2 < 2√2
    assert Sqrt2Scalar(-1, 1, 0).sign() == 1
    assert INV_SQRT2 < ONE
    assert not ZERO


def test_from_fraction_rejects_non_dyadic():
    with pytest.raises(ValueError):
        Sqrt2Scalar.from_fraction(Fraction(1, 3))


def test_str():
    assert str(INV_SQRT2) == "√2/2"
    assert str(Sqrt2Scalar(1, -1, 1)) == "(1-√2)/2"
    assert str(ZERO) == "0"


# ─── Extended integers ───

def test_neg_inf_below_integers():
    assert NEG_INF < -1000
    assert NEG_INF_EV < 0
    assert NEG_INF < NEG_INF_ODD
    assert ext_max(NEG_INF, 3, -2) == 3
    assert ext_max(NEG_INF, NEG_INF_EV) == NEG_INF_EV


def test_tag_flips_with_odd_shift():
    assert NEG_INF_EV + 1 == NEG_INF_ODD
    assert NEG_INF_EV + 2 == NEG_INF_EV
    assert NEG_INF_ODD - 1 == NEG_INF_EV
    assert NEG_INF + 5 == NEG_INF


def test_tagged_symbols_are_incomparable():
    with pytest.raises(IncomparableError):
        ext_max(NEG_INF_EV, NEG_INF_ODD)


def test_parity():
    assert parity(5) == 1
    assert parity(NEG_INF_ODD) == 1
    assert not is_finite(NEG_INF)
    with pytest.raises(ValueError):
        parity(NEG_INF)


def test_ext_json():
    for x in (3, NEG_INF, NEG_INF_EV, NEG_INF_ODD):
        assert ext_from_json(ext_to_json(x)) == x
    with pytest.raises(ValueError):
        ext_from_json('inf')
