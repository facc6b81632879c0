# test_qoracle.py — Quantum Oracle Tests
"""
Tests for exact Q(q) arithmetic, the rank-two modules and the crystal
limit oracle on small cases.

Usage:
    pytest test_qoracle.py
"""

from fractions import Fraction

import pytest
from sympy.polys.matrices import DomainMatrix

from src.qoracle import (
    ONE_Q, ZERO_Q, LaurentRational, OracleError, a2_eigenvalues, brace, build_rank_two_module,
    check_relations, closed_form_norm, compare_oracle, expected_a2_eigenvalues, lt_case_table,
    QMatrix, module_norms, nullspace, q_int, q_power, q_symbols, qbinom, qfact,
)
from src.rootdata import load_datum
from src.sqrt2 import ONE, Sqrt2Scalar


# ─── Q(q) and q-symbols ───

def test_q_integers():
    assert q_int(2) == q_power(1) + q_power(-1)
    assert q_int(0) == ZERO_Q
    assert q_int(-3) == -q_int(3)
    assert q_int(3).degree() == 2
    assert q_int(3).leading_coefficient() == 1


def test_brace():
    assert brace(0) == 2
    assert brace(2).degree() == 2
    assert brace(-1) == brace(1)


def test_factorials_and_binomials():
    assert qbinom(4, 2) == qfact(4) / (qfact(2) * qfact(2))
    assert qbinom(3, 0) == ONE_Q
    assert qbinom(3, -1) == ZERO_Q
    with pytest.raises(OracleError):
        qfact(-1)


def test_fractions_and_division():
    half = LaurentRational(Fraction(1, 2))
    assert half * 2 == ONE_Q
    assert (q_int(2) / q_int(2)) == ONE_Q
    with pytest.raises(OracleError):
        ONE_Q / ZERO_Q


def test_unknown_symbol():
    assert q_symbols('brace', 0) == 2
    with pytest.raises(OracleError):
        q_symbols('nope', 1)


# ─── Matrices over Q(q) ───

def test_qmatrix_algebra():
    b = QMatrix.from_entries(2, {(1, 0): q_int(2), (0, 1): ZERO_Q})
    assert isinstance(b.rep, DomainMatrix)
    assert b.rows == [{}, {0: q_int(2)}]
    assert (b @ b).is_zero()
    assert b.apply({0: ONE_Q}) == {1: q_int(2)}
    assert QMatrix.identity(2).kron(b).rows[3] == {2: q_int(2)}
    assert b.scale(q_power(1)).entry(1, 0) == q_power(2) + 1
    assert b - b == QMatrix.zeros(2)


def test_nullspace_over_q():
    assert nullspace([{0: ONE_Q, 1: -q_int(2)}], [0, 1]) == [{0: q_int(2), 1: ONE_Q}]
    # equations on columns outside cols are ignored
    assert nullspace([{7: ONE_Q}], [4, 5]) == [{4: ONE_Q}, {5: ONE_Q}]
    assert nullspace([{0: ONE_Q}, {1: brace(1)}], [0, 1]) == []


# ─── Modules ───

def test_minus_one_module_relations():
    m = build_rank_two_module(-1, (2, 1))
    assert m.dim == 3
    assert check_relations(m, divided_powers=True).ok


def test_zero_module_relations():
    m = build_rank_two_module(0, (3,))
    assert m.dim == 4
    assert m.k_exp == [3, 1, -1, -3]
    assert check_relations(m).ok


@pytest.mark.parametrize("case, params, datum", [
    (5, (1,), None),
    (0, (-1,), None),
    (2, (1, 2), None),
    (-1, (-1, 0), None),
    (2, (1,), 'a2_flip'),
])
def test_bad_module_requests(case, params, datum):
    with pytest.raises(OracleError):
        build_rank_two_module(case, params, load_datum(datum) if datum else None)


@pytest.mark.parametrize("n_minus, n_plus", [(1, 1), (2, 1), (3, 2), (2, -1)])
def test_norm_recursion_matches_closed_form(n_minus, n_plus):
    m = build_rank_two_module(-1, (n_minus, n_plus))
    for k, norm, c, h in module_norms(m):
        assert norm == closed_form_norm(n_minus, n_plus, m.s_i, k), f"WRONG norm for k={k}"
        assert (c, h) == lt_case_table(n_minus, n_plus, m.s_i, k)


def test_leading_term_cases():
    sqrt2 = Sqrt2Scalar.sqrt2_power(1)
    # p = n_+ - s = 1 inside (-1, n_-)
    assert lt_case_table(3, 2, 1, 1) == (ONE, 0)
    assert lt_case_table(3, 2, 1, 2) == (sqrt2, 0)
    assert lt_case_table(3, 2, 1, 3) == (sqrt2, 2)
    # p >= n_-
    assert lt_case_table(1, 3, 1, 1) == (ONE, 0)
    # p < 0
    assert lt_case_table(2, -1, 1, 2) == (ONE, 10)


def test_norms_only_for_minus_one():
    with pytest.raises(OracleError):
        module_norms(build_rank_two_module(0, (2,)))


# ─── a = 2 eigenvalues ───

@pytest.mark.parametrize("n, s, expected", [
    (1, 2, [1, 3]), (1, -2, [-3, -1]), (1, 1, [0, 2]), (1, 0, [-1, 1]),
    (2, 0, [-2, 0, 2]), (0, 3, [3]),
])
def test_expected_eigenvalues(n, s, expected):
    assert expected_a2_eigenvalues(n, s) == expected


@pytest.mark.parametrize("n, s", [(1, 1), (1, 0), (2, -1)])
def test_eigenvalues_from_module(n, s):
    assert a2_eigenvalues(n, s) == expected_a2_eigenvalues(n, s)


# ─── Crystal limit against the tensor rule ───

@pytest.mark.parametrize("case, params, partner", [
    (-1, (1, 1), None),
    (-1, (2, 0), None),
    (0, (2,), None),
    (2, (1,), (2,)),
])
def test_oracle_agrees_with_tensor_rule(case, params, partner):
    report = compare_oracle(build_rank_two_module(case, params), partner)
    assert report.ok, f"Oracle disagrees: {report.violations}"


def test_minus_one_rejects_partner():
    with pytest.raises(OracleError):
        compare_oracle(build_rank_two_module(-1, (1, 1)), (2,))
