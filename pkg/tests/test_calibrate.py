"""Tests for calibration loading and the calibration script."""

from __future__ import annotations

import json

import pytest

import calibrate
from config import config
from qboolean.models import Calibration
from qboolean.services.ensembles import classical_embed, majority
from qboolean.services.inequalities import talagrand_l1


@pytest.fixture
def calibration_file(tmp_path, monkeypatch):
    path = tmp_path / 'calibration.json'
    monkeypatch.setattr(config['production'], 'CALIBRATION_FILE', str(path))
    return path


def _stored(path) -> Calibration:
    return Calibration.from_dict(json.loads(path.read_text()))


def test_default_calibration_is_measured(settings):
    calibration = settings.calibration()
    assert calibration.c_emp_provenance != 'default (uncalibrated)'
    assert calibration.c_d_provenance != 'default (uncalibrated)'
    assert f'seed={settings.CALIBRATION_SEED}' in calibration.c_emp_provenance
    majority3 = talagrand_l1(classical_embed(majority(3))).implied_constant
    assert calibration.c_emp >= settings.TALAGRAND_MARGIN * majority3
    assert set(calibration.c_d) == {1, 2, 3}


def test_default_calibration_is_cached(settings):
    assert settings.calibration() is settings.calibration()


def test_calibrate_constants_writes_file(calibration_file):
    calibrate.calibrate_constants(n_max=3, count=8, seed=3)
    stored = _stored(calibration_file)
    assert stored.c_emp >= config['production'].TALAGRAND_MARGIN * 0.5
    assert set(stored.c_d) == {1, 2, 3}
    assert stored.c_d[1] >= 1.0 and stored.c_d[2] >= 1.0
    assert 'seed=3' in stored.c_emp_provenance
    assert 'seed=3' in stored.c_d_provenance


def test_production_config_loads_written_file(calibration_file):
    calibrate.calibrate_constants(n_max=3, count=8, seed=3)
    assert config['production'].calibration() == _stored(calibration_file)


def test_calibrate_constants_keeps_file_unless_confirmed(calibration_file, monkeypatch):
    pinned = Calibration(c_emp=9.0, c_emp_provenance='pinned', c_d={1: 2.0}, c_d_provenance='pinned')
    calibration_file.write_text(json.dumps(pinned.to_dict()))

    monkeypatch.setattr('builtins.input', lambda prompt: 'no')
    calibrate.calibrate_constants(n_max=2, count=4, seed=3)
    assert _stored(calibration_file) == pinned

    monkeypatch.setattr('builtins.input', lambda prompt: 'yes')
    calibrate.calibrate_constants(n_max=2, count=4, seed=3)
    assert _stored(calibration_file).c_emp != 9.0


def test_malformed_calibration_file_is_reported(calibration_file):
    calibration_file.write_text('{"c_emp": ')
    with pytest.raises(Exception, match='Failed to load calibration'):
        config['production'].calibration()
