# test_suite.py — Verification Suite Tests
"""
Runs the cheaper verification suites end to end and checks the closed-form
expectations they compare against.

Usage:
    pytest test_suite.py
"""

import random

import pytest

from src.crystal import check_S_conditions_for_tau
from src.export import export_graph
from src.icrystal import check_icrystal_axioms
from src.rootdata import load_datum
from src.suite import (
    SUITE_CASES, SuiteError, check_golden_files, expected_a1_icrystal, expected_grid_row,
    expected_string_tensor_f, golden_graphs,
    random_crystal, random_icrystal, run_suites, suite_associativity, suite_projective, suite_tensor,
)


def test_closed_form_expectations():
    assert expected_a1_icrystal(3, 1) == [(0, None), (2, (2, 1)), (2, (1, 1)), (4, (3, 1))]
    # n < |s|: every element is a self-loop
    assert expected_a1_icrystal(1, -2) == [(1, (0, -1)), (3, (1, -1))]
    assert expected_string_tensor_f(2, 3)[(0, 0)] == (0, 1)
    assert expected_string_tensor_f(2, 3)[(2, 3)] is None
    assert expected_grid_row(2, 3, 0, 3) is None


# ─── Golden files ───

def test_golden_files_are_byte_identical():
    graphs = golden_graphs()
    assert len(graphs) == 2 + 4 * 7
    report = check_golden_files(graphs)
    assert report.ok, f"Golden drift: {report.violations[:2]}"
    assert report.checked == 2 * len(graphs)


def test_golden_detects_drift_and_missing_files(tmp_path):
    stem, B = golden_graphs()[0]
    text = export_graph(B, 'json').replace('"b_0⊗b_1"', '"b_0⊗b_9"')
    (tmp_path / f"{stem}.json").write_text(text, encoding='utf-8')
    report = check_golden_files([(stem, B)], golden_dir=str(tmp_path))
    assert [v.clause for v in report.violations] == ['golden file', 'golden file']
    assert 'b_0⊗b_9' in report.violations[0].detail
    assert 'string_tensor_2_3.dot' in report.violations[1].detail


def test_random_factors_are_valid():
    rng = random.Random(7)
    for name in ('a1', 'a1xa1', 'a2_flip'):
        datum = load_datum(name)
        for _ in range(5):
            assert check_icrystal_axioms(random_icrystal(rng, datum)).ok
            assert check_S_conditions_for_tau(random_crystal(rng, datum)).ok


def test_runs_in_fixed_order():
    results = run_suites(['golden', 'builtin'])
    assert [r.case for r in results] == ['builtin', 'golden']
    for r in results:
        assert r.ok, f"Suite {r.case} fails: {r.report.violations[:2]}"
        assert r.to_json()['case'] == r.case


def test_unknown_case():
    with pytest.raises(SuiteError):
        run_suites(['builtin', 'nope'])


def test_worker_processes_keep_fixed_order():
    serial = run_suites(['a=0', 'builtin'], workers=1)
    pooled = run_suites(['a=0', 'builtin'], workers=2)
    assert [r.case for r in pooled] == ['builtin', 'a=0']
    assert [r.report.to_json() for r in pooled] == [r.report.to_json() for r in serial]


def test_workers_must_be_positive():
    with pytest.raises(SuiteError):
        run_suites(['builtin'], workers=0)


def test_case_names():
    assert SUITE_CASES[0] == 'builtin'
    assert 's-conditions' in SUITE_CASES


def test_small_tensor_suite():
    report = suite_tensor(seed=3, pairs=12)
    assert report.ok, f"{report.violations[:2]}"
    assert report.checked > 0


def test_small_associativity_suite():
    report = suite_associativity(seed=3, triples=3)
    assert report.ok, f"{report.violations[:2]}"


def test_projective_suite_on_rank_one():
    report = suite_projective(datums=[load_datum('a1')], max_length=4, nu_bound=1)
    assert report.ok, f"{report.violations[:2]}"
