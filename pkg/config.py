"""Application configuration."""

from __future__ import annotations

import json
import os
import tempfile
from functools import lru_cache
from pathlib import Path
from typing import Final

from dotenv import load_dotenv

from qboolean.models import Calibration, Tolerances

# Load environment variables
load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, default))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, default))


@lru_cache(maxsize=None)
def measure_calibration(n_max: int, count: int, seed: int, margin: float) -> Calibration:
    """Measure C_emp and C_d on seeded ensembles.

    Args:
        n_max: Largest qubit count in the sweep
        count: Random balanced operators per size for C_emp; a quarter of it per size for C_d
        seed: Root seed of the sweep
        margin: Factor applied to the largest observed Talagrand implied constant

    Returns:
        Calibration whose provenance names the sweep; C_d only for d <= n_max
    """
    from qboolean.services.inequalities import calibrate_c_emp
    from qboolean.services.learn import calibrate_cd

    per_degree = max(1, count // 4)
    return Calibration(
        c_emp=margin * calibrate_c_emp(n_max, count, seed),
        c_emp_provenance=(
            f"max implied constant over dictator, parity, majority and {count} balanced random QBFs "
            f"per size, n=1..{n_max}, seed={seed}, margin x{margin}"
        ),
        c_d={d: calibrate_cd(d, n_max, per_degree, seed) for d in (1, 2, 3) if d <= n_max},
        c_d_provenance=f"max ratio over random degree-d operators, n<={n_max}, {per_degree} per size, seed={seed}",
    )


class Config:
    """Base configuration class."""

    # Tolerances
    SUPPORT_TOL: float = _env_float('SUPPORT_TOL', 1e-10)
    PSD_TOL: float = _env_float('PSD_TOL', 1e-9)
    QBF_TOL: float = _env_float('QBF_TOL', 1e-10)
    ROUNDTRIP_TOL: float = _env_float('ROUNDTRIP_TOL', 1e-12)

    # Storage
    DENSE_MAX_QUBITS: int = _env_int('DENSE_MAX_QUBITS', 7)

    # Runs
    DEFAULT_SEED: int = _env_int('DEFAULT_SEED', 7)
    DEFAULT_TRIALS: int = _env_int('DEFAULT_TRIALS', 200)
    WORKERS: int = _env_int('WORKERS', 1)
    OUTPUT_DIR: str = os.getenv('OUTPUT_DIR', 'reports')
    LOG_LEVEL: str = os.getenv('LOG_LEVEL', 'INFO')

    # Calibration
    CALIBRATION_FILE: str = os.getenv('CALIBRATION_FILE', 'calibration.json')
    CALIBRATION_SEED: int = _env_int('CALIBRATION_SEED', 7)
    CALIBRATION_N_MAX: int = 4
    CALIBRATION_COUNT: int = 40
    TALAGRAND_MARGIN: Final[float] = 1.25
    T_GRID: Final[tuple[float, ...]] = (0.01, 0.1, 0.5, 1.0, 2.0)
    EPS_GRID: Final[tuple[float, ...]] = (0.25, 0.5, 1.0, 2.0)

    @classmethod
    def tolerances(cls) -> Tolerances:
        """Build the tolerance bundle passed to services.

        Returns:
            Tolerances populated from this configuration
        """
        return Tolerances(
            support=cls.SUPPORT_TOL,
            psd=cls.PSD_TOL,
            qbf=cls.QBF_TOL,
            roundtrip=cls.ROUNDTRIP_TOL,
        )

    @classmethod
    def calibration(cls) -> Calibration:
        """Load the pinned calibration table.

        Values in CALIBRATION_FILE, when present, are used as stored. Otherwise the
        constants are measured on a small seeded sweep, once per process.

        Returns:
            Calibration with provenance strings

        Raises:
            Exception: If the calibration file exists but cannot be parsed
        """
        path = Path(cls.CALIBRATION_FILE)
        if not path.exists():
            return measure_calibration(
                cls.CALIBRATION_N_MAX, cls.CALIBRATION_COUNT, cls.CALIBRATION_SEED, cls.TALAGRAND_MARGIN,
            )
        try:
            return Calibration.from_dict(json.loads(path.read_text()))
        except (OSError, ValueError, KeyError) as e:
            raise Exception(f"Failed to load calibration from {path}: {e}")


class DevelopmentConfig(Config):
    """Development configuration."""

    DEBUG: bool = True
    TESTING: bool = False


class ProductionConfig(Config):
    """Production configuration for long calibration sweeps."""

    DEBUG: bool = False
    TESTING: bool = False
    DEFAULT_TRIALS: int = _env_int('DEFAULT_TRIALS', 1000)


class TestingConfig(Config):
    """Testing configuration."""

    DEBUG: bool = True
    TESTING: bool = True
    DEFAULT_TRIALS: int = 10
    OUTPUT_DIR: str = os.path.join(tempfile.gettempdir(), 'qboolean-test-reports')
    CALIBRATION_FILE: str = os.path.join(tempfile.gettempdir(), 'qboolean-missing-calibration.json')


# Configuration dictionary
config: dict[str, type[Config]] = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig,
}
