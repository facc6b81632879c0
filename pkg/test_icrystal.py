# test_icrystal.py — ıCrystal Tests
"""
Tests for the ıcrystal model: built-in families, the axiom checker (also
on deliberately broken graphs) and morphism classification.

Usage:
    pytest test_icrystal.py
"""

import pytest

from src.extint import NEG_INF_ODD
from src.icrystal import (
    ICrystalError, ICrystalMorphism, builtin_equivalences, check_icrystal_axioms,
    _is_invertible, check_icrystal_morphism, disjoint_union, identity_icrystal_morphism, make_builtin_icrystal,
    string_icrystal, t_zeta, vee_icrystal, wedge_icrystal,
)
from src.rootdata import load_datum
from src.sqrt2 import INV_SQRT2, ONE, Sqrt2Scalar


@pytest.fixture(scope='module')
def a1():
    return load_datum('a1')


@pytest.fixture(scope='module')
def diag():
    return load_datum('a1xa1')


@pytest.fixture(scope='module')
def flip():
    return load_datum('a2_flip')


FAMILY_CASES = [
    ('a1', 'trivial', {}),
    ('a1', 't_zeta', {'zeta': [0]}),
    ('a1', 't_zeta', {'zeta': [1]}),
    ('a1', 'bi_rank1', {'n': 0}),
    ('a1', 'bi_rank1', {'n': -3}),
    ('a1', 'bi_rank1', {'n': 4}),
    ('a1', 'bi_two_cycle', {'n': 2}),
    ('a1xa1', 'trivial', {}),
    ('a1xa1', 't_zeta', {'zeta': [-3]}),
    ('a1xa1', 'bi_string', {'n': 0}),
    ('a1xa1', 'bi_string', {'n': 4}),
    ('a2_flip', 'trivial', {}),
    ('a2_flip', 'bi_minus', {'n_minus': 3, 'n_plus': 2}),
    ('a2_flip', 'bi_minus', {'n_minus': 4, 'n_plus': -1}),
    ('a2_flip', 'bi_minus', {'n_minus': 2, 'n_plus': 5}),
    ('a2_flip', 'bi_vee', {'n_minus': 3, 'n_plus': 2}),
    ('a2_flip', 'bi_vee', {'n_minus': 4, 'n_plus': 1}),
    ('a2_flip', 'bi_wedge', {'n_minus': 3, 'n_plus': 2}),
    ('a2_flip', 'bi_wedge', {'n_minus': 4, 'n_plus': 1}),
]


@pytest.mark.parametrize("name, family, params", FAMILY_CASES)
def test_builtin_families_pass_axioms(name, family, params):
    B = make_builtin_icrystal(family, load_datum(name), params)
    report = check_icrystal_axioms(B)
    assert report.ok, f"{family} {params} fails: {[v.to_json() for v in report.violations[:3]]}"


def test_t_zeta_tagged_infinity(a1):
    T = t_zeta(a1, a1.make_iweight([0]))
    # s = 1 is odd, zeta is even
    assert T.beta[0] == (NEG_INF_ODD,)
    assert T.btil[0][0] == {}


def test_vee_shape(flip):
    B = vee_icrystal(flip, 3, 2)
    assert len(B) == 6
    top = B.index[(1, '+')]
    assert B.btil[0][top] == {B.index[(2, '')]: INV_SQRT2}
    assert B.btil[1][B.index[(2, '')]] == {B.index[(1, '+')]: INV_SQRT2, B.index[(1, '-')]: INV_SQRT2}


def test_wedge_shape(flip):
    B = wedge_icrystal(flip, 3, 2)
    assert len(B) == 6
    split = B.index[(1, '')]
    assert B.btil[0][split] == {B.index[(2, '+')]: INV_SQRT2, B.index[(2, '-')]: INV_SQRT2}


@pytest.mark.parametrize("family, params", [
    ('bi_vee', {'n_minus': 3, 'n_plus': 4}),
    ('bi_vee', {'n_minus': 3, 'n_plus': 0}),
    ('bi_wedge', {'n_minus': 3, 'n_plus': 0}),
    ('bi_wedge', {'n_minus': 1, 'n_plus': 2}),
    ('bi_minus', {'n_minus': -1, 'n_plus': 0}),
    ('bi_rank1', {'n': 1}),
    ('no_such_family', {}),
    ('bi_vee', {'n_minus': 3}),
])
def test_invalid_family_requests(flip, family, params):
    with pytest.raises(ICrystalError):
        make_builtin_icrystal(family, flip, params)


def test_two_cycle_needs_positive_n(a1):
    with pytest.raises(ICrystalError):
        make_builtin_icrystal('bi_two_cycle', a1, {'n': 0})


def test_checker_flags_wrong_beta(diag):
    B = string_icrystal(diag, 2)
    B.beta[0] = (5, 0)
    report = check_icrystal_axioms(B)
    assert '(4b)' in report.clauses(), f"Expected (4b), got {report.clauses()}"


def test_checker_flags_missing_adjoint(diag):
    B = string_icrystal(diag, 2)
    B.btil[1][1] = {}
    report = check_icrystal_axioms(B)
    assert '(2.5)' in report.clauses(), f"Expected (2.5), got {report.clauses()}"


def test_checker_flags_a2_parity(a1):
    B = make_builtin_icrystal('bi_rank1', a1, {'n': 2})
    B.beta[0] = (3,)
    assert '(3b)' in check_icrystal_axioms(B).clauses()


def test_disjoint_union(flip):
    first = make_builtin_icrystal('bi_minus', flip, {'n_minus': 1, 'n_plus': 1})
    second = make_builtin_icrystal('bi_minus', flip, {'n_minus': 2, 'n_plus': 0})
    U = disjoint_union(first, second)
    assert len(U) == 5
    assert U.keys[2] == (1, 0)
    assert U.btil[0][2] == {3: ONE}
    assert check_icrystal_axioms(U).ok


# ─── Morphisms ───

def test_identity_is_isomorphism(flip):
    B = vee_icrystal(flip, 3, 2)
    verdict = check_icrystal_morphism(identity_icrystal_morphism(B))
    assert verdict.kind == 'isomorphism'


@pytest.mark.parametrize("name, family, params", [
    ('a1', 'bi_two_cycle', {'n': 2}),
    ('a1', 'bi_two_cycle', {'n': 3}),
    ('a2_flip', 'bi_vee', {'n_minus': 3, 'n_plus': 2}),
    ('a2_flip', 'bi_vee', {'n_minus': 2, 'n_plus': 1}),
    ('a2_flip', 'bi_wedge', {'n_minus': 3, 'n_plus': 2}),
    ('a2_flip', 'bi_wedge', {'n_minus': 2, 'n_plus': 1}),
])
def test_stated_equivalences(name, family, params):
    verdict = check_icrystal_morphism(builtin_equivalences(family, load_datum(name), params))
    assert verdict.kind == 'equivalence', f"{family} {params}: {verdict.kind} ({verdict.witness})"
    assert not verdict.flags['isomorphism']


def test_beta_mismatch_is_not_a_morphism(diag):
    B = string_icrystal(diag, 2)
    m = ICrystalMorphism(B, B, [{1: ONE}, {1: ONE}, {2: ONE}])
    assert check_icrystal_morphism(m).kind == 'none'


def test_no_equivalence_for_plain_string(diag):
    with pytest.raises(ICrystalError):
        builtin_equivalences('bi_string', diag, {'n': 2})


def test_invertibility_is_exact(diag):
    B = string_icrystal(diag, 1)
    root2 = Sqrt2Scalar(0, 1, 0)
    # det [[√2, 2], [1, √2]] = 0 exactly
    singular = ICrystalMorphism(B, B, [{0: root2, 1: ONE}, {0: Sqrt2Scalar.from_int(2), 1: root2}])
    assert not _is_invertible(singular)
    rotation = ICrystalMorphism(B, B, [{0: INV_SQRT2, 1: INV_SQRT2}, {0: INV_SQRT2, 1: -INV_SQRT2}])
    assert _is_invertible(rotation)
