"""Tests for verification suites and run orchestration."""

from __future__ import annotations

import json
from dataclasses import replace

import pytest

from conftest import read_jsonl
from qboolean import pipeline
from qboolean.exceptions import ValidationError
from qboolean.models import RunConfig


@pytest.fixture
def run_config(settings, tmp_path) -> RunConfig:
    return RunConfig(
        subcommand='verify', n_min=1, n_max=3, trials=3, seed=5,
        tolerances=settings.tolerances(), out_dir=str(tmp_path), fmt='json',
        calibration=settings.calibration(),
        options={'t_grid': [0.1, 1.0], 'eps_grid': [0.5, 2.0], 'gamma': 0.3, 'delta': 0.1},
    )


def _failures(rows):
    return [row for row in rows if row.get('asserted') and not row.get('satisfied')]


@pytest.mark.parametrize('name', [
    'roundtrip', 'parseval', 'poincare', 'strong_poincare', 'semigroup', 'carre_du_champ',
    'friedgut', 'talagrand', 'kkl', 'aux_kkl', 'integral', 'isoperimetry', 'bh',
])
def test_suite_passes(run_config, name):
    rows = pipeline.run_suite(run_config, name)
    assert rows
    assert not _failures(rows)
    assert all(row['suite'] == name and row['seed'] == 5 for row in rows)


def test_learning_suites_report_success_rates(run_config):
    config = replace(run_config, n_min=2, n_max=2, trials=4, options={**run_config.options, 'degree': 1})
    for name in ('goldreich_levin', 'low_degree'):
        rows = pipeline.run_suite(config, name)
        summary = [row for row in rows if row['name'] == f'{name}_success_rate']
        assert len(summary) == 1
        assert summary[0]['values']['trials'] == 4
        assert not _failures([row for row in rows if row['name'] == 'low_degree_queries'])


def test_weighted_suite_respects_qubit_limit(run_config):
    config = replace(run_config, n_min=3, n_max=4, trials=1)
    rows = pipeline.run_suite(config, 'weighted')
    assert {row['n'] for row in rows} == {3}
    assert not _failures(rows)


def test_goldreich_levin_skips_single_qubit(run_config):
    config = replace(run_config, n_min=1, n_max=1, trials=2)
    assert pipeline.run_suite(config, 'goldreich_levin') == []


def test_unknown_suite(run_config):
    with pytest.raises(ValidationError):
        pipeline.run_suite(run_config, 'nonexistent')


def test_records_are_independent_of_worker_count(run_config):
    config = replace(run_config, options={**run_config.options, 'suite': 'poincare'})
    serial = sorted(pipeline.run_suite(config, 'poincare'), key=pipeline._sort_key)
    threaded = sorted(pipeline.run_suite(replace(config, workers=3), 'poincare'), key=pipeline._sort_key)
    assert serial == threaded


def test_run_writes_report_and_metadata(run_config, tmp_path):
    config = replace(run_config, n_max=2, trials=2, options={**run_config.options, 'suite': 'roundtrip'})
    assert pipeline.run(config) == 0
    rows = read_jsonl(tmp_path / 'verify.jsonl')
    assert len(rows) == 4
    assert [row['n'] for row in rows] == [1, 1, 2, 2]
    meta = json.loads((tmp_path / 'run_meta.json').read_text())
    assert meta['records'] == 4 and meta['failures'] == 0
    stored = json.loads((tmp_path / 'run_config.json').read_text())
    assert stored['options']['suite'] == 'roundtrip'


def test_run_returns_failure_status(run_config, monkeypatch):
    def failing(config, n, index, rng):
        return [pipeline.assertion('always_fails', 1.0, 0.0, False)]

    monkeypatch.setitem(pipeline.SUITES, 'always_fails', failing)
    monkeypatch.setitem(pipeline.SUITE_QUBITS, 'always_fails', (1, None))
    config = replace(run_config, n_max=1, trials=1, options={'suite': 'always_fails'})
    assert pipeline.run(config) == 1


def test_run_rejects_unknown_pipeline(run_config):
    with pytest.raises(ValidationError):
        pipeline.run(replace(run_config, subcommand='unknown'))


def test_observation_rows_never_fail():
    row = pipeline.observation('bh', 2.0, 0.0)
    assert row['satisfied'] and not row['asserted']
    assert row['implied_constant'] == float('inf')


def _reject_constant(token):
    raise ValueError(f'Non-standard JSON constant {token}')


def test_kkl_report_is_strict_json(run_config, tmp_path):
    config = replace(run_config, n_min=1, n_max=2, trials=2, options={**run_config.options, 'suite': 'kkl'})
    assert pipeline.run(config) == 0
    lines = (tmp_path / 'verify.jsonl').read_text().splitlines()
    rows = [json.loads(line, parse_constant=_reject_constant) for line in lines]
    assert {row['n'] for row in rows} == {2}
    assert {row['name'] for row in rows} == {'kkl', 'kkl_l2'}
    json.loads((tmp_path / 'run_meta.json').read_text(), parse_constant=_reject_constant)


def test_aux_kkl_counts_only_points_meeting_the_hypothesis(run_config):
    rows = pipeline.run_suite(replace(run_config, n_min=1, n_max=1, trials=2), 'aux_kkl')
    assert len(rows) == 2
    for row in rows:
        assert row['satisfied']
        assert row['values']['hypothesis_held'] == pipeline.AUX_KKL_POINTS
        assert row['values']['draws'] >= pipeline.AUX_KKL_POINTS


def test_low_degree_skips_unsupported_degree(run_config, caplog):
    config = replace(run_config, n_min=3, n_max=3, trials=2, options={**run_config.options, 'degree': 3})
    assert pipeline.run_suite(config, 'low_degree') == []
    assert 'Skipping low_degree task' in caplog.text


def test_goldreich_levin_acceptance(run_config):
    config = replace(run_config, n_min=6, n_max=6, trials=100)
    rows = pipeline.run_suite(config, 'goldreich_levin')
    summary = [row for row in rows if row['name'] == 'goldreich_levin_success_rate']
    assert len(summary) == 1
    assert summary[0]['satisfied']
    assert summary[0]['values']['trials'] == 100
    assert not _failures(rows)


def test_low_degree_acceptance(run_config):
    options = {**run_config.options, 'degree': 2, 'low_degree_eps': 0.2, 'delta': 0.1}
    config = replace(run_config, n_min=5, n_max=5, trials=100, options=options)
    rows = pipeline.run_suite(config, 'low_degree')
    summary = [row for row in rows if row['name'] == 'low_degree_success_rate']
    assert len(summary) == 1
    assert summary[0]['satisfied']
    assert summary[0]['values']['trials'] == 100
    assert summary[0]['lhs'] >= 0.9
    assert sum(row['name'] == 'low_degree_queries' for row in rows) == 100
    assert not _failures(rows)
