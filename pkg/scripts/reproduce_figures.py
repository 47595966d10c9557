"""Regenerate the data behind every figure preset into one directory.

Each preset is written as CSV and JSON (the JSON carries the resolved config
and any skipped singular points). Plotting is left to the reader.

    python3 scripts/reproduce_figures.py --out figures/
"""
import argparse
import sys
from pathlib import Path

from thzturb.cli import PRESETS, main


def reproduce(out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name in PRESETS:
        for fmt in ("csv", "json"):
            path = out_dir / f"{name}.{fmt}"
            code = main(["--preset", name, "--format", fmt, "--out", str(path)])
            worst = max(worst, code)
            print(f"{name:6s} {fmt:4s} -> {path} (exit {code})")
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("figures"))
    sys.exit(reproduce(ap.parse_args().out))
