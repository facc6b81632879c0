# test_projective.py — Projective System Tests
"""
Tests for sigma, the morphisms of the projective system, the highest
weight characterization and the limit on T_zeta ⊗ B(infinity).

Usage:
    pytest test_projective.py
"""

import pytest

from src.projective import (
    LimitElement, ProjectiveError, b0_sigma, b_lambda_sigma, chain_step, check_coherence,
    check_diagonal_formulas, check_highest_weight_characterization, check_t_additivity,
    classify_system, compose, compute_sigma, diagonal_formula, dominant_representative, gamma_nu,
    limit_action, limit_evaluate, rho_lambda, sigma_bar,
)
from src.rootdata import load_datum


@pytest.fixture(scope='module')
def a1():
    return load_datum('a1')


@pytest.fixture(scope='module')
def diag():
    return load_datum('a1xa1')


@pytest.fixture(scope='module')
def flip():
    return load_datum('a2_flip')


@pytest.mark.parametrize("name, sigma", [('a1', (1,)), ('a1xa1', (0, 0)), ('a2_flip', (1, 0))])
def test_compute_sigma(name, sigma):
    assert compute_sigma(load_datum(name)) == sigma


def test_chain_step(a1, flip):
    assert chain_step(a1) == (2,)
    assert chain_step(flip) == (2, 2)
    assert chain_step(flip, (1, 0)) == (1, 1)


def test_b0_sigma(flip):
    B = b0_sigma(flip)
    assert len(B) == 1
    assert B.wti[0] == sigma_bar(flip)
    assert B.beta[0] == (0, 0)


def test_b_lambda_sigma_labels(flip):
    B = b_lambda_sigma(flip, (1, 0))
    assert len(B) == 3
    assert all(label.endswith('σ') for label in B.labels)


def test_non_dominant_weights_rejected(a1):
    with pytest.raises(ProjectiveError):
        gamma_nu(a1, (-1,))
    with pytest.raises(ProjectiveError):
        b_lambda_sigma(a1, (-2,))


# ─── Morphisms of the system ───

@pytest.mark.parametrize("name, lam, nu", [('a1', (0,), (1,)), ('a1', (1,), (1,)), ('a1xa1', (0, 0), (1, 1))])
def test_system_morphisms_are_very_strict(name, lam, nu):
    verdicts = classify_system(load_datum(name), lam, nu)
    for key in ('gamma', 'rho', 'pi'):
        assert verdicts[key].flags['very_strict'], f"{key} is {verdicts[key].kind}: {verdicts[key].witness}"


def test_gamma_sends_only_the_top_element(a1):
    g = gamma_nu(a1, (1,))
    assert len(g.source) == 4
    assert g.columns[0] and not any(g.columns[1:])


def test_coherence(a1):
    report = check_coherence(a1, (0,), (1,), (1,))
    assert report.ok, f"Coherence fails: {report.violations[:1]}"
    assert report.checked > 0


def test_compose_rejects_mismatched_sizes(a1):
    with pytest.raises(ProjectiveError):
        compose(gamma_nu(a1, (1,)), rho_lambda(a1, (0,)))


@pytest.mark.parametrize("name, nu", [('a1', (0,)), ('a1', (2,)), ('a2_flip', (0, 0)), ('a2_flip', (1, 0))])
def test_highest_weight_characterization(name, nu):
    report = check_highest_weight_characterization(load_datum(name), nu)
    assert report.ok, f"{report.violations}"


# ─── Limit ───

def test_dominant_representative(flip):
    assert dominant_representative(flip, flip.make_iweight([2])) == (2, 0)
    assert dominant_representative(flip, flip.make_iweight([0])) == (0, 0)


def test_limit_index_out_of_range(diag):
    with pytest.raises(ProjectiveError):
        limit_evaluate(diag, diag.make_iweight([0]), (0,), 5)


@pytest.mark.parametrize("z", [-1, 0, 2])
def test_diagonal_limit_matches_closed_formula(diag, z):
    words = [(), (0,), (1,), (0, 0), (0, 1), (1, 1)]
    report = check_diagonal_formulas(diag, diag.make_iweight([z]), words)
    assert report.ok, f"Limit and closed formula differ: {report.violations[:1]}"


def test_limit_action_keys(diag):
    zeta = diag.make_iweight([1])
    action = limit_action(diag, zeta, (), 0)
    expected, _ = diagonal_formula(diag, zeta, (), 0)
    assert {LimitElement(zeta, w) for w in expected} == set(action)


def test_limit_value_trace(diag):
    value = limit_evaluate(diag, diag.make_iweight([0]), (0,), 0, confirmations=2)
    assert len(value.trace) >= 3
    assert value.to_json()['lambda'] == list(value.lam)


def test_diagonal_formula_needs_a_zero(flip):
    with pytest.raises(ProjectiveError):
        diagonal_formula(flip, flip.make_iweight([0]), (), 0)


@pytest.mark.parametrize("name, zeta, mu", [('a1', [0], (1,)), ('a1', [1], (2,)), ('a2_flip', [1], (1, 2))])
def test_t_additivity(name, zeta, mu):
    datum = load_datum(name)
    assert check_t_additivity(datum, datum.make_iweight(zeta), mu) is None
