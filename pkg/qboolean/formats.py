"""File formats: operator, ensemble and run-config JSON, plus report writers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

from qboolean.exceptions import QBooleanError, ValidationError
from qboolean.models import DENSE_MAX_QUBITS, EnsembleSpec, FourierOperator, RunConfig

REPORT_COLUMNS = (
    'name', 'n', 'seed', 'index', 't', 'lhs', 'rhs', 'implied_constant', 'asserted', 'satisfied', 'slack',
)


def _finite(value: Any) -> Any:
    """Replace non-finite floats by the strings 'inf', '-inf' and 'nan', recursively."""
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(value, Mapping):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    return value


def _encode(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return _finite(float(value))
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return _finite(value.tolist())
    if isinstance(value, (set, frozenset)):
        return _finite(sorted(value))
    if isinstance(value, complex):
        return {'re': _finite(value.real), 'im': _finite(value.imag)}
    raise TypeError(f'Object of type {type(value).__name__} is not JSON serializable')


def dumps(data: Any) -> str:
    """Strict, deterministic JSON: sorted keys, numpy scalars and sets converted.

    Non-finite floats are written as the strings 'inf', '-inf' and 'nan'.
    """
    return json.dumps(_finite(data), sort_keys=True, allow_nan=False, default=_encode)


def read_json(path: str | Path) -> Any:
    """Read a JSON document.

    Raises:
        QBooleanError: If the file cannot be read or parsed
    """
    try:
        return json.loads(Path(path).read_text())
    except (OSError, ValueError) as e:
        raise QBooleanError(f"Failed to read {path}: {e}")


def write_json(path: str | Path, data: Any) -> Path:
    """Write a JSON document, creating parent directories.

    Raises:
        QBooleanError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(_finite(data), sort_keys=True, indent=2, allow_nan=False, default=_encode) + '\n')
    except OSError as e:
        raise QBooleanError(f"Failed to write {path}: {e}")
    return path


def load_operator(path: str | Path, dense_max_qubits: int = DENSE_MAX_QUBITS) -> FourierOperator:
    """Load an operator file {"n": int, "coeffs": [{"s", "re", "im"}, ...]}.

    Raises:
        QBooleanError: If the file cannot be read
        ValidationError: If the content is malformed
    """
    data = read_json(path)
    if not isinstance(data, Mapping):
        raise ValidationError(f'Operator file {path} must contain a JSON object.')
    return FourierOperator.from_dict(data, dense_max_qubits)


def save_operator(path: str | Path, F: FourierOperator, tol: float = 0.0) -> Path:
    """Write F in the operator file format, omitting coefficients with modulus <= tol."""
    return write_json(path, F.to_dict(tol))


def load_ensemble_spec(path: str | Path) -> EnsembleSpec:
    return EnsembleSpec.from_dict(read_json(path))


def load_run_config(path: str | Path) -> RunConfig:
    """Load a stored RunConfig for replay."""
    data = read_json(path)
    if not isinstance(data, Mapping):
        raise ValidationError(f'Run config {path} must contain a JSON object.')
    return RunConfig.from_dict(data)


def parse_omega(data: Mapping[str, Any]) -> np.ndarray:
    """Parse a 2×2 state {"re": [[..],[..]], "im": [[..],[..]]}; "im" defaults to zero.

    Raises:
        ValidationError: If the entries are missing or not 2×2
    """
    try:
        real = np.asarray(data['re'], dtype=float)
        imag = np.asarray(data.get('im', np.zeros((2, 2))), dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f'Malformed state data: {e}') from e
    if real.shape != (2, 2) or imag.shape != (2, 2):
        raise ValidationError('State must be a 2x2 matrix.')
    return real + 1j * imag


def _cell(value: Any) -> Any:
    if value is None:
        return ''
    if isinstance(value, (dict, list, tuple, set, frozenset)):
        return dumps(value)
    return _encode(value) if isinstance(value, (np.generic, complex)) else value


def write_reports(records: Iterable[Mapping[str, Any]], path: str | Path, fmt: str) -> Path:
    """Write report records as JSON lines or CSV.

    CSV columns start with name, n, seed, index, t, lhs, rhs, implied_constant, asserted,
    satisfied, slack; the remaining keys follow in sorted order. Nested values are
    JSON-encoded.

    Args:
        records: Flat report dictionaries, already in output order
        path: Destination file
        fmt: 'json' or 'csv'

    Returns:
        The written path

    Raises:
        ValidationError: If fmt is unknown
        QBooleanError: If the file cannot be written
    """
    if fmt not in ('json', 'csv'):
        raise ValidationError(f"Format must be 'json' or 'csv', got '{fmt}'.")
    rows = [dict(record) for record in records]
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', newline='') as handle:
            if fmt == 'json':
                for row in rows:
                    handle.write(dumps(row) + '\n')
            else:
                extra = sorted({key for row in rows for key in row} - set(REPORT_COLUMNS))
                writer = csv.DictWriter(handle, fieldnames=[*REPORT_COLUMNS, *extra], restval='')
                writer.writeheader()
                for row in rows:
                    writer.writerow({key: _cell(value) for key, value in row.items()})
    except OSError as e:
        raise QBooleanError(f"Failed to write reports to {path}: {e}")
    return path


def report_path(out_dir: str | Path, subcommand: str, fmt: str) -> Path:
    return Path(out_dir) / f"{subcommand}.{'jsonl' if fmt == 'json' else 'csv'}"
