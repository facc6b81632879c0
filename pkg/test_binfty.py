# test_binfty.py — B(infinity) Word Model Tests
"""
Tests for B(infinity) as stabilized F-words: evaluation in B(lambda),
stable statistics, equality, canonical words, B(lambda; mu) and iota_lambda.

Usage:
    pytest test_binfty.py
"""

import itertools

import pytest

from src.binfty import (
    b_lambda_mu, b_lambda_mu_member, binfty_equal, binfty_eval, binfty_raise, binfty_stats,
    canonical_word, covering_words, distinct_binfty_words, in_binfty_lambda, iota_lambda,
    stabilization_bound,
)
from src.crystal import CrystalError, b_lambda, check_crystal_morphism
from src.rootdata import load_datum


@pytest.fixture(scope='module')
def a1():
    return load_datum('a1')


@pytest.fixture(scope='module')
def flip():
    return load_datum('a2_flip')


def test_stats_of_highest_element(flip):
    top = binfty_stats(flip, ())
    assert top.wt == (0, 0)
    assert top.eps == (0, 0)
    assert top.phi == (0, 0)


def test_stats_satisfy_phi_eps_wt(flip):
    for word in ((0,), (0, 1), (1, 0, 0), (0, 1, 1, 0)):
        b = binfty_stats(flip, word)
        assert b.phi == tuple(e + w for e, w in zip(b.eps, b.wt)), f"phi ≠ eps + wt for {word}"


def test_stats_rank_one(a1):
    b = binfty_stats(a1, (0, 0))
    assert b.wt == (-4,) and b.eps == (2,) and b.phi == (-2,)


def test_stabilization_bound(flip):
    assert stabilization_bound(flip, (0, 1)) == 6


def test_equality(flip):
    assert binfty_equal(flip, (0, 1), (0, 1))
    assert not binfty_equal(flip, (0, 1), (1, 0))
    assert not binfty_equal(flip, (0,), (0, 0))


def test_commuting_letters_are_equal():
    diag = load_datum('a1xa1')
    assert binfty_equal(diag, (0, 1), (1, 0))
    assert canonical_word(diag, (1, 0)) == canonical_word(diag, (0, 1))


def test_canonical_word_represents_the_same_element(flip):
    for word in itertools.product((0, 1), repeat=3):
        canon = canonical_word(flip, word)
        assert len(canon) == len(word)
        assert binfty_equal(flip, word, canon), f"canonical word of {word} is {canon}"


@pytest.mark.parametrize("name, depth, count", [('a1', 3, 4), ('a1xa1', 2, 6), ('a2_flip', 2, 7)])
def test_distinct_words(name, depth, count):
    words = distinct_binfty_words(load_datum(name), depth)
    assert len(words) == count, f"WRONG count for {name}: {words}"
    assert words[0] == ()


def test_raise(flip):
    assert binfty_raise(flip, (), 0) is None
    assert binfty_raise(flip, (0,), 0) == ()
    assert binfty_raise(flip, (0,), 1) is None


def test_eval_in_b_lambda(flip):
    assert binfty_eval(flip, (), (1, 0)) == 0
    assert binfty_eval(flip, (0,), (1, 0)) is not None
    assert binfty_eval(flip, (0, 0), (1, 0)) is None
    assert not in_binfty_lambda(flip, (1,), (1, 0))
    with pytest.raises(CrystalError):
        binfty_eval(flip, (2,), (1, 0))


def test_covering_words(flip):
    B = b_lambda(flip, (1, 1))
    words = covering_words(B)
    assert words[0] == ()
    for b, w in enumerate(words):
        assert binfty_eval(flip, w, (1, 1)) == b


def test_b_lambda_mu(flip):
    members = b_lambda_mu(flip, (1, 1), (1, 0))
    assert len(members) == 3, f"WRONG B(λ;μ): {members}"
    assert 0 in members
    with pytest.raises(CrystalError):
        b_lambda_mu_member(flip, (), (1, 0), (1, 1))


def test_iota_lambda_is_a_morphism_but_not_strict(a1):
    kind, witness = check_crystal_morphism(iota_lambda(a1, (2,)))
    assert kind == 'morphism', f"WRONG kind: {kind} ({witness})"
