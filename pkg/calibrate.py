"""Pin the empirical calibration constants (run once per release)."""

from __future__ import annotations

import json
from pathlib import Path


def calibrate_constants(n_max: int = 6, count: int = 200, seed: int = 7) -> None:
    """Measure C_emp and C_d on seeded ensembles and write the calibration file."""
    from config import config, measure_calibration

    settings = config['production']
    path = Path(settings.CALIBRATION_FILE)

    print("Calibrating Empirical Constants")
    print("="*50)
    print(f"Calibration file: {path}")
    print(f"Qubits: 1..{n_max}, instances per size: {count}, seed: {seed}")

    if path.exists():
        current = json.loads(path.read_text())
        print(f"\nExisting calibration: C_emp={current.get('c_emp')} C_d={current.get('c_d')}")
        response = input("\nOverwrite calibration? (yes/no): ")

        if response.lower() != 'yes':
            print("Calibration cancelled.")
            return

    print("\nMeasuring Talagrand implied constants and Bohnenblust-Hille ratios...")
    calibration = measure_calibration(n_max, count, seed, settings.TALAGRAND_MARGIN)
    print(f"✓ C_emp = {calibration.c_emp:.6f} (margin x{settings.TALAGRAND_MARGIN})")
    for d, value in sorted(calibration.c_d.items()):
        print(f"✓ C_{d} = {value:.6f}")

    path.write_text(json.dumps(calibration.to_dict(), indent=2, sort_keys=True) + "\n")

    print("\n" + "="*50)
    print("Calibration written successfully!")
    print("="*50)
    print("\nIMPORTANT: verify runs pick up the new constants from this file.")


if __name__ == '__main__':
    calibrate_constants()
