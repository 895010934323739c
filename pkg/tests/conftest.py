"""Shared fixtures."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable

import numpy as np
import pytest
from click.testing import CliRunner

from config import config
from qboolean import create_cli
from qboolean.models import FourierOperator, PauliString
from qboolean.services.ensembles import classical_embed, dictator, parity
from qboolean.utils.helpers import instance_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return instance_rng(20240101)


@pytest.fixture
def settings() -> type:
    return config['testing']


@pytest.fixture
def sigma_z() -> FourierOperator:
    return FourierOperator.from_coefficients(1, {'3': 1.0})


@pytest.fixture
def dictator3() -> FourierOperator:
    return classical_embed(dictator(3))


@pytest.fixture
def parity4() -> FourierOperator:
    return classical_embed(parity(4))


@pytest.fixture
def cli():
    return create_cli('testing')


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def write_operator(tmp_path: Path) -> Callable[[str, FourierOperator], str]:
    """Write an operator file under tmp_path and return its path."""
    def write(name: str, F: FourierOperator) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(F.to_dict()))
        return str(path)
    return write


def read_jsonl(path: Path) -> list[dict]:
    return [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]


def pauli(label: str) -> PauliString:
    return PauliString.from_label(label)
