# test_itensor.py — ıCrystal ⊗ Crystal Tests
"""
Tests for the tensor rule, induced ıcrystal structures, associativity,
tensor products of morphisms and the a = -1 cross-checks.

Usage:
    pytest test_itensor.py
"""

import pytest

from src.crystal import identity_morphism, natural_crystal, string_crystal
from src.icrystal import (
    check_icrystal_axioms, check_icrystal_morphism, make_builtin_icrystal, trivial_icrystal,
    two_cycle_equivalence,
)
from src.itensor import (
    ITensorError, check_associativity, check_estimate_identities, check_natural_coincidence,
    check_natural_shape, check_row_norms, check_tensor_morphism_clauses, compare_under, grid_icrystal,
    induce_icrystal, natural_shape, natural_tensor_rule, tensor_icrystal_crystal, tensor_morphisms,
    tensor_stats,
)
from src.rootdata import load_datum
from src.sqrt2 import ONE, Sqrt2Scalar
from test_crystal import s1_violating_crystal


@pytest.fixture(scope='module')
def a1():
    return load_datum('a1')


@pytest.fixture(scope='module')
def diag():
    return load_datum('a1xa1')


@pytest.fixture(scope='module')
def flip():
    return load_datum('a2_flip')


# ─── a = 2 ───

def test_a1_rank_one_times_string(a1):
    # s = 1, n = 3: b_0 isolated, b_1 <-> b_2, b_3 a +1 self-loop
    B = tensor_icrystal_crystal(make_builtin_icrystal('bi_rank1', a1, {'n': 1}), string_crystal(a1, 3))
    assert [B.beta[k][0] for k in range(4)] == [0, 2, 2, 4], f"WRONG beta: {B.beta}"
    assert B.btil[0][0] == {}
    assert B.btil[0][1] == {2: ONE}
    assert B.btil[0][2] == {1: ONE}
    assert B.btil[0][3] == {3: ONE}
    assert check_icrystal_axioms(B).ok


def test_negative_s_self_loops(a1):
    datum = load_datum('a1')
    B = tensor_icrystal_crystal(make_builtin_icrystal('bi_rank1', datum, {'n': -3}), string_crystal(datum, 1))
    minus_one = Sqrt2Scalar.from_int(-1)
    assert B.btil[0][0] == {0: minus_one}
    assert B.btil[0][1] == {1: minus_one}
    assert [B.beta[k][0] for k in range(2)] == [2, 4]


def test_tensor_stats_parity_bump(a1):
    B1 = make_builtin_icrystal('bi_rank1', a1, {'n': 1})
    B2 = string_crystal(a1, 3)
    st = tensor_stats(B1, 0, B2, 1, 0)
    assert (st.F, st.B, st.E) == (3, 1, 2)
    assert st.branch() == 'F'


def test_tensor_needs_same_datum(a1, flip):
    with pytest.raises(ITensorError):
        tensor_icrystal_crystal(trivial_icrystal(a1), natural_crystal(flip))


# ─── a = 0 ───

@pytest.mark.parametrize("k, l, target", [
    (0, 0, (0, 1)), (1, 1, (1, 2)), (1, 2, (0, 2)), (2, 3, (1, 3)), (0, 3, None),
])
def test_grid_rows(diag, k, l, target):
    G = grid_icrystal(diag, 2, 3)
    row = G.btil[0][G.index[(k, l)]]
    expected = {} if target is None else {G.index[target]: ONE}
    assert row == expected, f"WRONG B_i b_{k},{l}: {row}"


def test_grid_modes_agree(diag):
    general = grid_icrystal(diag, 2, 3, 'general')
    seminormal = grid_icrystal(diag, 2, 3, 'seminormal')
    assert compare_under(general, seminormal, list(general.elements)) is None
    assert check_icrystal_axioms(general).ok


def test_induce_rejects_s_condition_failure(diag):
    with pytest.raises(ITensorError):
        induce_icrystal(s1_violating_crystal(diag))


def test_induce_unknown_mode(diag):
    with pytest.raises(ITensorError):
        induce_icrystal(string_crystal(diag, 1), mode='fancy')


# ─── a = -1 ───

@pytest.mark.parametrize("n_minus, n_plus", [(0, 0), (1, 1), (2, 1), (3, 2), (2, -1)])
def test_natural_coincidence(flip, n_minus, n_plus):
    B1 = make_builtin_icrystal('bi_minus', flip, {'n_minus': n_minus, 'n_plus': n_plus})
    report = check_natural_coincidence(B1)
    assert report.ok, f"General and closed rules differ: {report.violations[:1]}"


def test_natural_rule_needs_minus_one(a1):
    with pytest.raises(ITensorError):
        natural_tensor_rule(trivial_icrystal(a1))


def test_minus_one_product_is_an_icrystal(flip):
    B1 = make_builtin_icrystal('bi_vee', flip, {'n_minus': 3, 'n_plus': 2})
    nat = natural_crystal(flip)
    product = tensor_icrystal_crystal(B1, nat)
    assert len(product) == 18
    assert check_icrystal_axioms(product).ok
    assert check_row_norms(product).ok
    assert check_estimate_identities(B1, nat, product).ok


def test_associativity(flip):
    nat = natural_crystal(flip)
    same, witness = check_associativity(trivial_icrystal(flip), nat, nat)
    assert same, f"Associativity fails: {witness}"


# ─── Morphisms ───

def test_tensor_of_equivalence_and_identity(a1):
    m1 = two_cycle_equivalence(a1, 2)
    m2 = identity_morphism(string_crystal(a1, 1))
    assert check_icrystal_morphism(tensor_morphisms(m1, m2)).kind == 'equivalence'
    report = check_tensor_morphism_clauses(m1, m2)
    assert report.ok, f"Inheritance clause fails: {report.violations}"


@pytest.mark.parametrize("p, shape, components", [
    (-3, 'strings', 3), (-1, '∧', 2), (0, 'strings', 3), (2, '∨', 2), (4, 'strings', 3),
])
def test_natural_shapes(flip, p, shape, components):
    s = flip.s[flip.i_tau[0]]
    B1 = make_builtin_icrystal('bi_minus', flip, {'n_minus': 2, 'n_plus': p + s})
    product = tensor_icrystal_crystal(B1, natural_crystal(flip))
    assert natural_shape(product) == (shape, components), f"WRONG shape at p={p}"
    assert check_natural_shape(B1, 2, p).ok
