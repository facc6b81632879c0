# test_rootdata.py — Cartan/Satake Datum Tests
"""
Tests for datum validation, the bundled data and the X^ı projection.

Usage:
    pytest test_rootdata.py
"""

import json

import pytest

from src.rootdata import (
    DatumError, bundled_datums, datum_to_json, load_datum, project_weight, validate_datum,
    weight_add,
)


def test_bundled_datums_present():
    names = bundled_datums()
    for name in ('a1', 'a1xa1', 'a2_flip'):
        assert name in names, f"MISSING bundled datum: {name}"


def test_bundled_cases():
    a1, diag, flip = load_datum('a1'), load_datum('a1xa1'), load_datum('a2_flip')
    assert a1.a_tau(0) == 2
    assert diag.a_tau(0) == 0 and diag.a_tau(1) == 0
    assert flip.a_tau(0) == -1
    assert flip.i_tau == (0,), f"WRONG i_tau: {flip.i_tau}"
    assert flip.s == (1, 0)


def test_validation_reports_first_violation():
    with pytest.raises(DatumError, match="a_ii"):
        validate_datum({'gcm': [[3]]})
    with pytest.raises(DatumError, match="τ² ≠ id"):
        validate_datum({'gcm': [[2, -1, 0], [-1, 2, -1], [0, -1, 2]], 'tau': [1, 2, 0]})
    with pytest.raises(DatumError, match="s_i ≠ 0"):
        validate_datum({'gcm': [[2, 0], [0, 2]], 'tau': [1, 0], 's': [1, 0]})
    with pytest.raises(DatumError, match="s_i \\+ s_"):
        validate_datum({'gcm': [[2, -1], [-1, 2]], 'tau': [1, 0], 's': [0, 0]})


def test_a_tau_outside_allowed_set():
    # a_{i,tau(i)} = -2
    with pytest.raises(DatumError):
        validate_datum({'gcm': [[2, -2], [-2, 2]], 'tau': [1, 0], 's': [1, 0]})


def test_symmetrizer_check():
    with pytest.raises(DatumError, match="d_i a_ij"):
        validate_datum({'gcm': [[2, -1], [-2, 2]], 'd': [1, 1]})
    ok = validate_datum({'gcm': [[2, -1], [-2, 2]], 'd': [2, 1]})
    assert ok.rank == 2


def test_load_missing_datum():
    with pytest.raises(DatumError, match="not found"):
        load_datum('no_such_datum')


def test_load_from_path(tmp_path):
    path = tmp_path / "flip.json"
    path.write_text(json.dumps(datum_to_json(load_datum('a2_flip'))), encoding='utf-8')
    again = load_datum(str(path))
    assert again.gcm == load_datum('a2_flip').gcm
    assert again.s == (1, 0)


def test_projection_split_orbit():
    flip = load_datum('a2_flip')
    zeta = project_weight((3, 1), flip)
    assert zeta.values == (2,), f"WRONG projection: {zeta.values}"
    # lambda + tau(lambda) projects to zero
    lam = (2, 5)
    assert project_weight(weight_add(lam, flip.tau_weight(lam)), flip) == flip.zero_iweight()


def test_projection_fixed_point_is_parity():
    a1 = load_datum('a1')
    assert project_weight((3,), a1).values == (1,)
    assert project_weight((4,), a1).values == (0,)
    assert a1.iweight_mask() == (True,)


def test_iweight_at_sign_on_tau_partner():
    flip = load_datum('a2_flip')
    zeta = flip.make_iweight([2])
    assert flip.iweight_at(zeta, 0) == 2
    assert flip.iweight_at(zeta, 1) == -2


def test_components_and_type_a_path():
    diag = load_datum('a1xa1')
    assert diag.components() == [(0,), (1,)]
    flip = load_datum('a2_flip')
    assert flip.components() == [(0, 1)]
    assert flip.type_a_path((0, 1)) == [0, 1]
