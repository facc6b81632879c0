# test_crystal.py — Crystal Tests
"""
Tests for explicit crystals: families, the tensor rule, highest-weight
closure, axiom and S-condition checkers, morphisms.

Usage:
    pytest test_crystal.py
"""

import pytest

from src.crystal import (
    CapExceededError, CrystalError, CrystalGraph, CrystalMorphism, b_lambda, check_crystal_associativity,
    check_crystal_axioms, check_crystal_morphism, check_S_conditions, check_S_conditions_for_tau,
    check_seminormal, highest_weight_component, identity_morphism, make_crystal, natural_crystal,
    string_crystal, t_lambda, tensor_crystals,
)
from src.extint import NEG_INF
from src.rootdata import load_datum


@pytest.fixture(scope='module')
def a1():
    return load_datum('a1')


@pytest.fixture(scope='module')
def flip():
    return load_datum('a2_flip')


@pytest.fixture(scope='module')
def diag():
    return load_datum('a1xa1')


def s1_violating_crystal(diag) -> CrystalGraph:
    """Two elements where E_0 moves eps_1: breaks (S1) for a_01 = 0."""
    return CrystalGraph(
        diag, [0, 1], ['x', 'y'],
        [(-1, 0), (1, -1)],
        [(1, 0), (0, 1)],
        [(0, 0), (2, 0)],
        [(1, None), (None, None)],
        [(None, None), (0, None)],
        name='bad',
    )


# ─── Families ───

def test_string_crystal(a1):
    B = string_crystal(a1, 3)
    assert len(B) == 4
    assert [B.f[b][0] for b in B.elements] == [1, 2, 3, None]
    assert B.wt[0] == (3,) and B.wt[3] == (-3,)
    assert check_crystal_axioms(B).ok
    assert check_seminormal(B).ok


def test_string_crystal_needs_orthogonal_node(flip):
    with pytest.raises(CrystalError):
        string_crystal(flip, 2, 0)


def test_t_lambda(flip):
    T = t_lambda(flip, (2, -1))
    assert len(T) == 1
    assert T.eps[0] == (NEG_INF, NEG_INF)
    assert check_crystal_axioms(T).ok


def test_natural_crystal(flip):
    B = natural_crystal(flip)
    assert len(B) == 3
    assert B.wt[0] == (1, 0) and B.wt[1] == (-1, 1) and B.wt[2] == (0, -1)
    assert B.f[0][0] == 1 and B.f[1][1] == 2


def test_natural_crystal_needs_connected_datum(diag):
    with pytest.raises(CrystalError):
        natural_crystal(diag)


@pytest.mark.parametrize("hw, size", [((1, 0), 3), ((0, 1), 3), ((2, 0), 6), ((1, 1), 8), ((2, 1), 15), ((2, 2), 27)])
def test_b_lambda_sizes(flip, hw, size):
    B = b_lambda(flip, hw)
    assert len(B) == size, f"WRONG size for B{hw}: {len(B)}"
    assert B.wt[0] == hw
    assert B.highest_elements() == [0]
    assert check_crystal_axioms(B).ok
    assert check_seminormal(B).ok


def test_b_lambda_cap(flip):
    with pytest.raises(CapExceededError):
        b_lambda(flip, (2, 2), cap=10)


def test_b_lambda_rejects_non_dominant(flip):
    with pytest.raises(CrystalError):
        b_lambda(flip, (-1, 0))


def test_make_crystal_dispatch(flip, a1):
    assert len(make_crystal('B_lambda', flip, {'hw': [2, 0]})) == 6
    assert len(make_crystal('B_n_rank1', a1, {'n': 2})) == 3
    with pytest.raises(CrystalError):
        make_crystal('no_family', a1, {})


# ─── Tensor products ───

def test_tensor_rule_b2_b3(a1):
    B = tensor_crystals(string_crystal(a1, 2), string_crystal(a1, 3))
    f = {B.keys[b]: (B.keys[B.f[b][0]] if B.f[b][0] is not None else None) for b in B.elements}
    assert f[(0, 0)] == (0, 1)
    assert f[(0, 3)] == (1, 3)
    assert f[(1, 2)] == (2, 2)
    assert f[(2, 1)] is None
    assert f[(1, 0)] == (1, 1)
    assert check_crystal_axioms(B).ok


def test_tensor_highest_components(a1):
    B = tensor_crystals(string_crystal(a1, 2), string_crystal(a1, 3))
    tops = sorted(B.wt[b][0] for b in B.highest_elements())
    assert tops == [1, 3, 5], f"WRONG decomposition: {tops}"


def test_highest_weight_component_needs_highest_seed(a1):
    B = string_crystal(a1, 2)
    with pytest.raises(CrystalError):
        highest_weight_component(B, 1)


def test_crystal_associativity(flip):
    nat = natural_crystal(flip)
    same, witness = check_crystal_associativity(nat, b_lambda(flip, (0, 1)), nat)
    assert same, f"Associativity failed: {witness}"


# ─── S-conditions ───

def test_s_conditions_hold_on_b_lambda(flip):
    for hw in ((1, 0), (1, 1), (2, 1)):
        report = check_S_conditions_for_tau(b_lambda(flip, hw))
        assert report.ok, f"S-conditions fail on B{hw}: {report.violations[:1]}"


@pytest.mark.parametrize("hw", [(1, 0), (1, 1), (2, 3)])
def test_s_conditions_hold_on_diagonal_b_lambda(diag, hw):
    # a = 0: E_j always raises phi_j, so only (S1)-(S3)' and consequence (1) apply
    report = check_S_conditions_for_tau(b_lambda(diag, hw))
    assert report.ok, f"S-conditions fail on B{hw}: {report.violations[:1]}"


def test_s_conditions_detect_violation(diag):
    report = check_S_conditions(s1_violating_crystal(diag), 0, 1)
    assert not report.ok
    assert '(S1)' in report.clauses()


def test_s_conditions_need_orthogonal_or_simple_pair(a1):
    with pytest.raises(CrystalError):
        check_S_conditions(string_crystal(a1, 1), 0, 0)


# ─── Morphisms ───

def test_identity_is_isomorphism(flip):
    kind, witness = check_crystal_morphism(identity_morphism(b_lambda(flip, (1, 1))))
    assert kind == 'isomorphism', f"WRONG kind: {kind} ({witness})"


def test_weight_mismatch_is_not_a_morphism(a1):
    B = string_crystal(a1, 2)
    kind, _ = check_crystal_morphism(CrystalMorphism(B, B, [1, 1, 2]))
    assert kind == 'not-a-morphism'
