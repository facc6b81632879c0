# test_cli.py — Command-Line Tests
"""
Drives main() the way a shell would and checks exit codes and artifacts.

Usage:
    pytest test_cli.py
"""

import json

import pytest

from main import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, InputError, main, parse_params


def _run(tmp_path, *argv, name='out.json'):
    out = tmp_path / name
    code = main([*argv, '--out', str(out)])
    return code, out


# ─── Parameters ───

def test_parse_params_tokens():
    assert parse_params(['n=3', 'hw=2,0']) == {'n': 3, 'hw': [2, 0]}
    assert parse_params(['n-minus=2']) == {'n_minus': 2}


def test_parse_params_json():
    assert parse_params(['{"n_minus": 3,', '"n_plus": 2}']) == {'n_minus': 3, 'n_plus': 2}


def test_parse_params_rejects_bare_token():
    with pytest.raises(InputError):
        parse_params(['n'])


# ─── build / check ───

def test_build_icrystal(tmp_path):
    code, out = _run(tmp_path, 'build', '--family', 'bi_vee', '--n-minus', '3', '--n-plus', '2')
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding='utf-8'))
    assert payload['kind'] == 'icrystal'
    assert len(payload['elements']) == 6


def test_build_b_lambda(tmp_path):
    code, out = _run(tmp_path, 'build', '--family', 'b_lambda', '--hw', '2,0')
    assert code == EXIT_OK
    assert len(json.loads(out.read_text(encoding='utf-8'))['elements']) == 6


def test_build_dot(tmp_path):
    code, out = _run(tmp_path, 'build', '--family', 'natural', '--format', 'dot', name='nat.dot')
    assert code == EXIT_OK
    assert out.read_text(encoding='utf-8').startswith('digraph')


@pytest.mark.parametrize("argv", [
    ['build', '--family', 'no_such_family'],
    ['build'],
    ['build', '--family', 'bi_vee', '--n-minus', '3', '--n-plus', '7'],
    ['build', '--family', 'b_lambda'],
    ['build', '--family', 'bi_vee', '--datum', 'no_such_datum'],
    ['build', '--family', 'trivial', '--format', 'svg'],
    ['build', '--family', 'trivial', '--cap', '0'],
    [],
])
def test_input_errors(argv):
    assert main(argv) == EXIT_INPUT


def test_check_with_equivalence(tmp_path):
    code, out = _run(tmp_path, 'check', '--family', 'bi_wedge', '--n-minus', '3', '--n-plus', '2',
                     '--equivalence')
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding='utf-8'))
    assert payload['ok']
    assert payload['morphism']['kind'] == 'equivalence'


def test_check_from_file(tmp_path):
    _, graph = _run(tmp_path, 'build', '--family', 'bi_minus', '--params', 'n_minus=2', 'n_plus=1',
                    name='minus.json')
    code, out = _run(tmp_path, 'check', '--input', str(graph), name='report.json')
    assert code == EXIT_OK
    assert len(json.loads(out.read_text(encoding='utf-8'))['reports']) == 2


def test_check_failure_exits_one(tmp_path):
    _, graph = _run(tmp_path, 'build', '--family', 'bi_minus', '--params', 'n_minus=2', 'n_plus=1',
                    name='minus.json')
    payload = json.loads(graph.read_text(encoding='utf-8'))
    payload['elements'][0]['beta'][0] = 99
    graph.write_text(json.dumps(payload), encoding='utf-8')
    code, out = _run(tmp_path, 'check', '--input', str(graph), name='report.json')
    assert code == EXIT_FAILURE, f"WRONG exit code: {code}"
    report = json.loads(out.read_text(encoding='utf-8'))
    assert not report['ok']
    first = report['reports'][0]['violations'][0]
    assert first['clause'] == '(5b)' and '99' in first['witness']


# ─── tensor / induce / graph ───

def test_tensor_families(tmp_path):
    code, out = _run(tmp_path, 'tensor', '--datum', 'a1', '--left-family', 'bi_rank1', '--left-params', 'n=1',
                     '--right-family', 'B_n_rank1', '--right-params', 'n=3')
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding='utf-8'))
    assert len(payload['elements']) == 4


def test_tensor_needs_icrystal_on_the_left(tmp_path):
    code, _ = _run(tmp_path, 'tensor', '--datum', 'a1', '--left-family', 'B_n_rank1', '--left-params', 'n=1',
                   '--right-family', 'bi_rank1', '--right-params', 'n=3')
    assert code == EXIT_INPUT


def test_induce_from_file(tmp_path):
    _, crystal = _run(tmp_path, 'build', '--datum', 'a1xa1', '--family', 'B_n_rank1', '--n', '2',
                      name='string.json')
    code, out = _run(tmp_path, 'induce', '--datum', 'a1xa1', '--input', str(crystal), '--mode', 'seminormal',
                     name='induced.json')
    assert code == EXIT_OK
    assert json.loads(out.read_text(encoding='utf-8'))['kind'] == 'icrystal'


def test_induce_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json", encoding='utf-8')
    assert main(['induce', '--input', str(bad)]) == EXIT_INPUT
    assert main(['induce', '--input', str(tmp_path / "missing.json")]) == EXIT_INPUT


def test_graph_to_dot(tmp_path):
    _, graph = _run(tmp_path, 'build', '--family', 'bi_vee', '--n-minus', '3', '--n-plus', '2', name='vee.json')
    code, out = _run(tmp_path, 'graph', '--input', str(graph), '--format', 'dot', name='vee.dot')
    assert code == EXIT_OK
    assert '√2/2' in out.read_text(encoding='utf-8')


# ─── verify-paper / projective ───

def test_verify_paper_golden(tmp_path):
    code, out = _run(tmp_path, 'verify-paper', '--case', 'golden')
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding='utf-8'))
    assert [r['case'] for r in payload['reports']] == ['golden']


def test_verify_paper_unknown_case():
    assert main(['verify-paper', '--case', 'nope']) == EXIT_INPUT


def test_projective_limit(tmp_path):
    code, out = _run(tmp_path, 'projective', '--datum', 'a1xa1', '--zeta', '1', '--word', '0')
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding='utf-8'))
    assert [v['i'] for v in payload['values']] == [0, 1]
    assert all(v['ok'] for v in payload['values'])


def test_projective_bad_index():
    assert main(['projective', '--datum', 'a1', '--index', '3']) == EXIT_INPUT


def test_verify_paper_rejects_zero_workers():
    assert main(['verify-paper', '--case', 'builtin', '--workers', '0']) == EXIT_INPUT
