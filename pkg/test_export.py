# test_export.py — Serialization Tests
"""
Tests for the JSON and DOT renderings of crystals and ıcrystals.

Usage:
    pytest test_export.py
"""

import json

import pytest

from src.crystal import b_lambda
from src.export import ExportError, export_graph, icrystal_from_json, import_graph
from src.icrystal import string_icrystal, vee_icrystal
from src.rootdata import load_datum


@pytest.fixture(scope='module')
def flip():
    return load_datum('a2_flip')


def test_icrystal_json_is_reloaded_exactly(flip):
    B = vee_icrystal(flip, 3, 2)
    again = import_graph(export_graph(B, 'json'))
    assert again.keys == B.keys
    assert again.beta == B.beta
    assert again.wti == B.wti
    assert again.btil == B.btil, "B_tau(i) not rebuilt from the I_tau edges"


def test_icrystal_json_lists_only_i_tau_edges():
    diag = load_datum('a1xa1')
    payload = json.loads(export_graph(string_icrystal(diag, 2), 'json'))
    assert payload['kind'] == 'icrystal'
    assert {e['i'] for e in payload['btil']} == {0}
    assert len(payload['btil']) == 2


def test_icrystal_rejects_edges_outside_i_tau():
    diag = load_datum('a1xa1')
    payload = json.loads(export_graph(string_icrystal(diag, 1), 'json'))
    payload['btil'][0]['i'] = 1
    with pytest.raises(ExportError):
        icrystal_from_json(payload)


def test_crystal_json_is_reloaded_exactly(flip):
    B = b_lambda(flip, (1, 1))
    again = import_graph(export_graph(B, 'json'))
    assert len(again) == 8
    assert again.f == B.f
    assert again.e == B.e
    assert again.wt == B.wt


def test_json_is_deterministic(flip):
    B = vee_icrystal(flip, 3, 2)
    assert export_graph(B, 'json') == export_graph(vee_icrystal(flip, 3, 2), 'json')


def test_dot_labels_amplitudes(flip):
    dot = export_graph(vee_icrystal(flip, 3, 2), 'dot')
    assert dot.startswith('digraph')
    assert '(1, √2/2)' in dot, "Non-unit amplitudes must appear in the edge label"
    assert '[label="1"]' in dot


def test_unknown_format(flip):
    with pytest.raises(ExportError):
        export_graph(b_lambda(flip, (1, 0)), 'svg')
