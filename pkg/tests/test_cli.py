"""Tests for the command-line interface."""

from __future__ import annotations

import csv
import json

import pytest

from conftest import read_jsonl
from qboolean import formats
from qboolean.models import FourierOperator
from qboolean.services.ensembles import classical_embed, dictator


def invoke(runner, cli, out, *args):
    return runner.invoke(cli, ['--out', str(out), *args])


def test_verify_writes_report(runner, cli, tmp_path):
    result = invoke(runner, cli, tmp_path, 'verify', '--suite', 'poincare', '--n', '1..2', '--trials', '2')
    assert result.exit_code == 0, result.output
    assert 'Report:' in result.output
    rows = read_jsonl(tmp_path / 'verify.jsonl')
    assert {row['n'] for row in rows} == {1, 2}
    assert all(row['satisfied'] for row in rows if row['asserted'])
    assert (tmp_path / 'run_config.json').exists()
    assert json.loads((tmp_path / 'run_meta.json').read_text())['records'] == len(rows)


def test_verify_csv_report(runner, cli, tmp_path):
    result = invoke(runner, cli, tmp_path, '--format', 'csv', 'verify', '--suite', 'roundtrip', '--n', '2', '--trials', '3')
    assert result.exit_code == 0, result.output
    with (tmp_path / 'verify.csv').open() as handle:
        reader = csv.DictReader(handle)
        rows = list(reader)
    assert reader.fieldnames[:len(formats.REPORT_COLUMNS)] == list(formats.REPORT_COLUMNS)
    assert len(rows) == 3


def test_analyze(runner, cli, tmp_path, write_operator):
    path = write_operator('dictator.json', classical_embed(dictator(3)))
    result = invoke(runner, cli, tmp_path, 'analyze', '--input', path)
    assert result.exit_code == 0, result.output
    rows = {row['name']: row for row in read_jsonl(tmp_path / 'analyze.jsonl')}
    assert rows['quantum_boolean']['values']['is_quantum_boolean']
    assert rows['support']['values']['support'] == [0]
    assert {'kkl', 'kkl_l2'} <= set(rows)


def test_junta_writes_operator_files(runner, cli, tmp_path, write_operator):
    path = write_operator('dictator.json', classical_embed(dictator(3)))
    result = invoke(runner, cli, tmp_path, 'junta', '--input', path, '--eps', '1', '--boolean')
    assert result.exit_code == 0, result.output
    extracted = formats.load_operator(tmp_path / 'junta_operator.json')
    assert extracted.coefficient('300') == pytest.approx(1.0)
    assert (tmp_path / 'boolean_junta_operator.json').exists()
    names = [row['name'] for row in read_jsonl(tmp_path / 'junta.jsonl')]
    assert names == ['boolean_junta', 'friedgut']


def test_ensemble_writes_members(runner, cli, tmp_path):
    result = invoke(runner, cli, tmp_path, 'ensemble', '--family', 'dictator', '--n', '3', '--count', '2')
    assert result.exit_code == 0, result.output
    target = tmp_path / 'ensemble'
    assert (target / 'dictator_n3_spec.json').exists()
    members = sorted(path.name for path in target.glob('dictator_n3_0*.json'))
    assert members == ['dictator_n3_0000.json', 'dictator_n3_0001.json']
    assert formats.load_operator(target / members[0]).coefficient('300') == pytest.approx(1.0)


def test_weighted(runner, cli, tmp_path):
    result = invoke(runner, cli, tmp_path, 'weighted', '--omega', '0.7', '--n', '1', '--trials', '2')
    assert result.exit_code == 0, result.output
    names = {row['name'] for row in read_jsonl(tmp_path / 'weighted.jsonl')}
    assert {'general_poincare_l1', 'general_talagrand_l1', 'hypercontractivity_alpha'} <= names


def test_weighted_from_file(runner, cli, tmp_path):
    omega = tmp_path / 'omega.json'
    omega.write_text(json.dumps({'re': [[0.6, 0.0], [0.0, 0.4]]}))
    result = invoke(runner, cli, tmp_path, 'weighted', '--omega-file', str(omega), '--n', '1', '--trials', '1')
    assert result.exit_code == 0, result.output


def test_dynamics(runner, cli, tmp_path):
    result = invoke(runner, cli, tmp_path, 'dynamics', '--n', '3', '--time', '0.5')
    assert result.exit_code == 0, result.output
    rows = read_jsonl(tmp_path / 'dynamics.jsonl')
    assert sum(row['name'] == 'commutator_bound' for row in rows) == 3
    assert sum(row['name'] == 'influence_decay' for row in rows) == 3


def test_learn(runner, cli, tmp_path, write_operator):
    path = write_operator('hidden.json', classical_embed(dictator(4)))
    result = invoke(runner, cli, tmp_path, 'learn', '--hidden', path, '--k-hint', '1', '--eps', '0.3')
    assert result.exit_code == 0, result.output
    rows = read_jsonl(tmp_path / 'learn.jsonl')
    assert len(rows) == 1
    assert rows[0]['values']['success']


def test_learn_low_degree(runner, cli, tmp_path, write_operator):
    path = write_operator('hidden.json', FourierOperator.from_coefficients(2, {'30': 1.0}))
    result = invoke(runner, cli, tmp_path, 'learn', '--hidden', path, '--degree', '1', '--trials', '2')
    assert result.exit_code == 0, result.output
    assert len(read_jsonl(tmp_path / 'learn.jsonl')) == 2


def test_replay_reproduces_report(runner, cli, tmp_path):
    first, second = tmp_path / 'first', tmp_path / 'second'
    assert invoke(runner, cli, first, 'verify', '--suite', 'semigroup', '--n', '1..2', '--trials', '2').exit_code == 0
    result = runner.invoke(cli, ['replay', str(first / 'run_config.json'), '--out', str(second)])
    assert result.exit_code == 0, result.output
    assert (second / 'verify.jsonl').read_text() == (first / 'verify.jsonl').read_text()


def test_malformed_operator_file_is_a_usage_error(runner, cli, tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"n": 2}')
    result = invoke(runner, cli, tmp_path, 'analyze', '--input', str(path))
    assert result.exit_code == 2


def test_out_of_range_eps_is_a_usage_error(runner, cli, tmp_path, write_operator):
    path = write_operator('dictator.json', classical_embed(dictator(2)))
    assert invoke(runner, cli, tmp_path, 'junta', '--input', path, '--eps', '3').exit_code == 2


def test_bad_qubit_range_is_a_usage_error(runner, cli, tmp_path):
    assert invoke(runner, cli, tmp_path, 'verify', '--n', '3..1').exit_code == 2
    assert invoke(runner, cli, tmp_path, 'verify', '--n', 'two').exit_code == 2


def test_weighted_requires_exactly_one_state(runner, cli, tmp_path):
    omega = tmp_path / 'omega.json'
    omega.write_text(json.dumps({'re': [[0.6, 0.0], [0.0, 0.4]]}))
    assert invoke(runner, cli, tmp_path, 'weighted').exit_code == 2
    both = invoke(runner, cli, tmp_path, 'weighted', '--omega', '0.6', '--omega-file', str(omega))
    assert both.exit_code == 2


def test_invalid_state_is_a_usage_error(runner, cli, tmp_path):
    assert invoke(runner, cli, tmp_path, 'weighted', '--omega', '1.0', '--n', '1').exit_code == 2
