"""Regenerate the bundled illustrative water-vapour absorption table.

The curve is a handful of Lorentzian lines on a quadratic continuum, tuned
only to have the right orders of magnitude at sea level (~7.5 g/m^3). It is
a placeholder so the toolkit runs out of the box; supply a real spectroscopic
table via ``--absorption-table`` for any quantitative use.
"""
import argparse
from pathlib import Path

import numpy as np

# (centre GHz, peak dB/km, half-width GHz)
LINES = [
    (183.31, 30.0, 3.0),
    (325.15, 40.0, 3.0),
    (380.20, 350.0, 3.2),
    (448.00, 150.0, 3.0),
    (474.69, 25.0, 3.0),
    (556.94, 3.0e4, 3.2),
    (620.70, 80.0, 3.0),
    (752.03, 1.2e4, 3.1),
    (916.17, 400.0, 3.0),
    (970.32, 600.0, 3.0),
    (987.93, 1.0e4, 3.0),
]


def absorption_db_per_km(f_ghz):
    k = 4.0e-6 * f_ghz**2
    for f0, peak, w in LINES:
        k = k + peak * w**2 / ((f_ghz - f0) ** 2 + w**2)
    return k


def main():
    default = Path(__file__).resolve().parents[1] / "src/thzturb/data/sample_absorption_illustrative.csv"
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=default)
    args = ap.parse_args()
    f_ghz = np.arange(100, 1001, 10, dtype=float)
    k_np_m = absorption_db_per_km(f_ghz) / 4343.0
    lines = ["freq_hz,k_np_per_m"]
    lines += [f"{f * 1e9:.0f},{k:.6e}" for f, k in zip(f_ghz, k_np_m)]
    args.out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(f_ghz)} rows to {args.out}")


if __name__ == "__main__":
    main()
