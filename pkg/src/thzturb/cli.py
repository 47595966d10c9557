"""Command-line front end: figure-data sweeps, link budgets and fading runs.

Usage::

    thzturb <scenario> [--config cfg.json] [flags] [--out path] [--format csv|json]
    thzturb --preset fig5a --out fig5a.csv

Values that can be swept accept a scalar (``300``), a list (``100,300,1000``)
or a range ``start:stop:points[:lin|log]``. Config-file keys are the flag
names in snake case; flags override the file, and the file overrides a preset.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from scipy.integrate import simpson

from . import __version__
from .errors import DataError, DomainError, NumericalError, OutOfRangeError, SingularityError
from .link import LinkGeometry, monte_carlo_fading, slant_path_budget
from .medium import NO_RAIN, DropSizeDistribution, load_absorption_table, sample_absorption_table
from .scintillation import (
    aperture_parameter,
    gamma_gamma_pdf,
    large_small_scale_params,
    sample_scintillation,
    turbulence_attenuation,
)
from .turbulence import EnvironmentState, RiscParams, risc_thz, risc_visible, rytov_variance

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

SCENARIOS = ("risc-profile", "rytov", "scint-pdf", "scint-sample", "atten", "budget", "fading")
FORMATS = ("csv", "json")

_FREQ_GRID = "100:1000:91"

# Preset grids are chosen reconstructions; each run echoes its grid in the metadata.
PRESETS: dict[str, dict[str, Any]] = {
    "fig2": {"scenario": "risc-profile", "alt_range": "0:10000:201",
             "ground_cn2": "1.7e-15,1.7e-14,1.7e-13", "wind": "10,21,30"},
    "fig3a": {"scenario": "rytov", "freq_ghz": _FREQ_GRID, "cn2": "1e-11",
              "dist_m": "100,1000,10000,100000"},
    "fig3b": {"scenario": "rytov", "freq_ghz": _FREQ_GRID, "dist_m": "10000",
              "cn2": "1e-15,1e-14,1e-13,1e-12,1e-11"},
    "fig4": {"scenario": "scint-pdf", "rytov_list": "0.1,1,10"},
    "fig5a": {"scenario": "atten", "freq_ghz": _FREQ_GRID, "cn2": "1e-13",
              "dist_m": "100,1000,5000,10000"},
    "fig5b": {"scenario": "atten", "freq_ghz": _FREQ_GRID, "dist_m": "1000",
              "cn2": "1e-15,1e-14,1e-13,1e-12,1e-11"},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Sweep:
    start: float
    stop: float
    points: int
    spacing: str = "lin"

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError(f"sweep needs points >= 2, got {self.points}")
        if self.spacing not in ("lin", "log"):
            raise ConfigError(f"sweep spacing must be 'lin' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError("log sweep bounds must be > 0")

    def values(self) -> tuple[float, ...]:
        if self.spacing == "log":
            grid = np.geomspace(self.start, self.stop, self.points)
        else:
            grid = np.linspace(self.start, self.stop, self.points)
        return tuple(float(v) for v in grid)


def _parse_values(name: str, raw: Any) -> tuple[float, ...]:
    """Scalar, list, ``start:stop:points[:spacing]`` string, or sweep mapping."""
    try:
        if isinstance(raw, dict):
            return Sweep(float(raw["start"]), float(raw["stop"]), int(raw["points"]),
                         raw.get("spacing", "lin")).values()
        if isinstance(raw, (list, tuple)):
            vals = tuple(float(v) for v in raw)
        elif isinstance(raw, (int, float)):
            vals = (float(raw),)
        else:
            text = str(raw).strip()
            if ":" in text:
                parts = text.split(":")
                if len(parts) not in (3, 4):
                    raise ConfigError("range must be start:stop:points[:lin|log]")
                spacing = parts[3] if len(parts) == 4 else "lin"
                return Sweep(float(parts[0]), float(parts[1]), int(parts[2]), spacing).values()
            vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ConfigError as exc:
        raise ConfigError(f"{name}: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: cannot parse {raw!r} ({exc})") from None
    if not vals:
        raise ConfigError(f"{name}: empty value list")
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{name}: values must be finite")
    return vals


def _scalar(kind):
    def parse(name, raw):
        try:
            return kind(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{name}: cannot parse {raw!r} as {kind.__name__}") from None
    return parse


def _choice(options):
    def parse(name, raw):
        if raw not in options:
            raise ConfigError(f"{name}: {raw!r} is not one of {', '.join(options)}")
        return raw
    return parse


def _complex(name, raw):
    try:
        return complex(str(raw).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {raw!r} as a complex number") from None


_FIELD_PARSERS = {
    "scenario": _choice(SCENARIOS),
    "preset": _choice(tuple(PRESETS)),
    "format": _choice(FORMATS),
    "out": _scalar(str),
    "absorption_table": _scalar(str),
    "freq_ghz": _parse_values,
    "dist_m": _parse_values,
    "cn2": _parse_values,
    "ground_cn2": _parse_values,
    "wind": _parse_values,
    "alt_range": _parse_values,
    "rytov_list": _parse_values,
    "intensity_range": _parse_values,
    "alpha": _scalar(float),
    "beta": _scalar(float),
    "n": _scalar(int),
    "seed": _scalar(int),
    "workers": _scalar(int),
    "segments": _scalar(int),
    "h_tx_m": _scalar(float),
    "h_rx_m": _scalar(float),
    "temperature_k": _scalar(float),
    "pressure_pa": _scalar(float),
    "vapour_pa": _scalar(float),
    "rain_n0": _scalar(float),
    "rain_rho0": _scalar(float),
    "particle_index": _complex,
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run description; every emitted file records it verbatim."""

    scenario: str
    preset: str | None = None
    format: str = "csv"
    out: str | None = None
    seed: int = 0
    freq_ghz: tuple[float, ...] = (300.0,)
    dist_m: tuple[float, ...] = (1000.0,)
    cn2: tuple[float, ...] = (1e-13,)
    ground_cn2: tuple[float, ...] = (1.7e-14,)
    wind: tuple[float, ...] = (21.0,)
    alt_range: tuple[float, ...] = Sweep(0.0, 10_000.0, 201).values()
    rytov_list: tuple[float, ...] = (0.1, 1.0, 10.0)
    intensity_range: tuple[float, ...] = Sweep(0.001, 20.0, 20_000).values()
    alpha: float | None = None
    beta: float | None = None
    n: int = 100_000
    workers: int = 1
    segments: int = 64
    h_tx_m: float = 0.0
    h_rx_m: float = 0.0
    temperature_k: float = 288.15
    pressure_pa: float = 101_325.0
    vapour_pa: float = 1_170.0
    rain_n0: float = 0.0
    rain_rho0: float = 4100.0
    particle_index: complex = complex(1.0, 0.0)
    absorption_table: str | None = None

    def as_json(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["particle_index"] = [self.particle_index.real, self.particle_index.imag]
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


def resolve_config(flags: dict[str, Any], file_values: dict[str, Any] | None = None) -> RunConfig:
    """Merge preset < config file < flags and validate every field."""
    file_values = dict(file_values or {})
    unknown = set(file_values) - set(_FIELD_PARSERS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    preset = flags.get("preset") or file_values.get("preset")
    merged: dict[str, Any] = {}
    if preset is not None:
        merged.update(PRESETS[_FIELD_PARSERS["preset"]("preset", preset)])
        merged["preset"] = preset
    merged.update({k: v for k, v in file_values.items() if v is not None})
    merged.update({k: v for k, v in flags.items() if v is not None})
    if "scenario" not in merged:
        raise ConfigError("scenario: no scenario given (positional argument, config key or preset)")
    parsed = {name: _FIELD_PARSERS[name](name, raw) for name, raw in merged.items()}
    if parsed.get("n", 1) < 1:
        raise ConfigError("n: must be >= 1")
    return RunConfig(**parsed)


# ---------------------------------------------------------------- scenarios


@dataclass
class Table:
    columns: list[str]
    data: list[list[Any]]
    metadata: dict[str, Any] = dataclasses.field(default_factory=dict)


def _tag(value: float) -> str:
    return f"{value:g}"


def _risc_profile(cfg: RunConfig) -> Table:
    env = _environment(cfg)
    cols, data = ["altitude_m"], [list(cfg.alt_range)]
    combos = [(A, v) for A in cfg.ground_cn2 for v in cfg.wind]
    for A, v in combos:
        params = RiscParams(A, v)
        suffix = "" if len(combos) == 1 else f"_A{_tag(A)}_v{_tag(v)}"
        cols.append(f"cn2_vis{suffix}_m_minus_2_3")
        data.append([risc_visible(h, params) for h in cfg.alt_range])
        cols.append(f"cn2_thz{suffix}_m_minus_2_3")
        data.append([risc_thz(h, params, env) for h in cfg.alt_range])
    return Table(cols, data)


def _link_combos(cfg: RunConfig):
    many = len(cfg.dist_m) * len(cfg.cn2) > 1
    for L in cfg.dist_m:
        for c in cfg.cn2:
            yield L, c, (f"_L{_tag(L)}m_cn2_{_tag(c)}" if many else "")


def _rytov(cfg: RunConfig) -> Table:
    cols, data = ["freq_ghz"], [list(cfg.freq_ghz)]
    for L, c, suffix in _link_combos(cfg):
        cols.append(f"sigma_r2{suffix}")
        data.append([rytov_variance(c, f * 1e9, L) for f in cfg.freq_ghz])
    return Table(cols, data)


def _atten(cfg: RunConfig) -> Table:
    cols, data, skipped = ["freq_ghz"], [list(cfg.freq_ghz)], []
    for L, c, suffix in _link_combos(cfg):
        name = f"atten_db{suffix}"
        column = []
        for i, f in enumerate(cfg.freq_ghz):
            s2 = rytov_variance(c, f * 1e9, L)
            try:
                column.append(turbulence_attenuation(s2, aperture_parameter(f * 1e9, L)))
            except SingularityError:
                column.append(None)
                skipped.append({"column": name, "index": i, "sigma_r2": s2})
        cols.append(name)
        data.append(column)
    return Table(cols, data, {"skipped_singular": skipped})


def _scint_pdf(cfg: RunConfig) -> Table:
    grid = cfg.intensity_range
    if min(grid) <= 0.0:
        raise ConfigError("intensity_range: intensities must be > 0")
    cols, data, params, integrals = ["intensity"], [list(grid)], [], []
    for s2 in cfg.rytov_list:
        p = large_small_scale_params(s2, 0.0)
        if p.no_turbulence:
            raise ConfigError("rytov_list: Rytov variances must be > 0")
        pdf = [float(v) for v in gamma_gamma_pdf(np.array(grid), p.alpha, p.beta)]
        cols.append(f"pdf_sr2_{_tag(s2)}")
        data.append(pdf)
        params.append({"sigma_r2": s2, "alpha": p.alpha, "beta": p.beta})
        integrals.append(float(simpson(pdf, x=np.array(grid))))
    return Table(cols, data, {"shape_parameters": params, "grid_integrals": integrals})


def _scint_sample(cfg: RunConfig) -> Table:
    if cfg.alpha is None or cfg.beta is None:
        raise ConfigError("alpha/beta: scint-sample requires both --alpha and --beta")
    s = sample_scintillation(cfg.alpha, cfg.beta, cfg.n, cfg.seed, workers=cfg.workers)
    return Table(["intensity"], [[float(v) for v in s.samples]])


def _environment(cfg: RunConfig) -> EnvironmentState:
    try:
        return EnvironmentState(cfg.temperature_k, cfg.pressure_pa, cfg.vapour_pa)
    except DomainError as exc:
        raise ConfigError(f"temperature_k/pressure_pa/vapour_pa: {exc}") from None


def _table(cfg: RunConfig):
    if cfg.absorption_table is None:
        return sample_absorption_table()
    return load_absorption_table(cfg.absorption_table)


def _dsd(cfg: RunConfig) -> DropSizeDistribution:
    if cfg.rain_n0 == 0.0:
        return NO_RAIN
    try:
        return DropSizeDistribution(cfg.rain_n0, cfg.rain_rho0, cfg.particle_index)
    except DomainError as exc:
        raise ConfigError(f"rain_n0/rain_rho0/particle_index: {exc}") from None


def _budget_for(cfg: RunConfig, f_ghz: float, L: float, table, risc):
    try:
        geom = LinkGeometry(cfg.h_tx_m, cfg.h_rx_m, L, f_ghz * 1e9)
    except DomainError as exc:
        raise ConfigError(f"h_tx_m/h_rx_m/dist_m/freq_ghz: {exc}") from None
    return slant_path_budget(geom, risc, _environment(cfg), table=table, dsd=_dsd(cfg),
                             segments=cfg.segments)


def _risc_params(cfg: RunConfig) -> RiscParams:
    if len(cfg.ground_cn2) != 1 or len(cfg.wind) != 1:
        raise ConfigError("ground_cn2/wind: budget scenarios take a single value each")
    try:
        return RiscParams(cfg.ground_cn2[0], cfg.wind[0])
    except DomainError as exc:
        raise ConfigError(f"ground_cn2/wind: {exc}") from None


_BUDGET_COLUMNS = ["freq_ghz", "dist_m", "h_tx_m", "h_rx_m", "fspl_db", "abs_db", "sca_db",
                   "turbulence_db", "total_db", "path_cn2_m_minus_2_3", "sigma_r2", "regime"]


def _budget(cfg: RunConfig) -> Table:
    table, risc = _table(cfg), _risc_params(cfg)
    rows = []
    for f in cfg.freq_ghz:
        for L in cfg.dist_m:
            b = _budget_for(cfg, f, L, table, risc)
            rows.append([f, L, cfg.h_tx_m, cfg.h_rx_m, b.losses.fspl_db, b.losses.abs_db,
                         b.losses.sca_db, b.turbulence_db, b.total_db, b.path_cn2, b.sigma_R2,
                         b.regime.value])
    return Table(list(_BUDGET_COLUMNS), [list(c) for c in zip(*rows)],
                 {"segments": cfg.segments})


def _fading(cfg: RunConfig) -> Table:
    if len(cfg.freq_ghz) != 1 or len(cfg.dist_m) != 1:
        raise ConfigError("freq_ghz/dist_m: fading takes a single frequency and distance")
    if cfg.n < 100:
        raise ConfigError("n: fading needs n >= 100")
    b = _budget_for(cfg, cfg.freq_ghz[0], cfg.dist_m[0], _table(cfg), _risc_params(cfg))
    rep = monte_carlo_fading(b, cfg.alpha, cfg.beta, cfg.n, cfg.seed, workers=cfg.workers)
    names = ["budget_total_db", "alpha", "beta", "mean_intensity", "variance_intensity",
             "scintillation_index_empirical", "scintillation_index_analytic"]
    values = [b.total_db, rep.alpha, rep.beta, rep.mean, rep.variance,
              rep.scintillation_index, rep.analytic_scintillation_index]
    for q, v in rep.intensity_quantiles.items():
        names.append(f"intensity_q{round(q * 100):02d}")
        values.append(v)
    for q, v in rep.loss_db_quantiles.items():
        names.append(f"loss_db_q{round(q * 100):02d}")
        values.append(v)
    return Table(["quantity", "value"], [names, values])


_RUNNERS = {
    "risc-profile": _risc_profile,
    "rytov": _rytov,
    "scint-pdf": _scint_pdf,
    "scint-sample": _scint_sample,
    "atten": _atten,
    "budget": _budget,
    "fading": _fading,
}


def compute(cfg: RunConfig) -> Table:
    table = _RUNNERS[cfg.scenario](cfg)
    table.metadata = {"tool": "thzturb", "version": __version__, "config": cfg.as_json(),
                      **table.metadata}
    table.metadata.setdefault("skipped_singular", [])
    return table


# ---------------------------------------------------------------- output


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {"columns": {name: col for name, col in zip(table.columns, table.data)},
               "metadata": table.metadata}
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"
    lines = [",".join(table.columns)]
    for row in zip(*table.data):
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> int:
    """Execute one resolved configuration; returns the process exit status."""
    try:
        text = render(compute(cfg), cfg.format)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc)
    except (DataError, OutOfRangeError) as exc:
        return _fail(EXIT_DATA, exc)
    except (SingularityError, NumericalError) as exc:
        return _fail(EXIT_NUMERIC, exc)
    except DomainError as exc:
        return _fail(EXIT_CONFIG, exc)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(cfg.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            return _fail(EXIT_CONFIG, f"out: cannot write {cfg.out} ({exc})")
    return EXIT_OK


def _fail(code: int, exc) -> int:
    print(f"thzturb: error: {exc}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thzturb", description=__doc__.splitlines()[0])
    ap.add_argument("scenario", nargs="?", choices=SCENARIOS)
    ap.add_argument("--config", help="JSON file whose keys mirror the flags in snake case")
    ap.add_argument("--preset", choices=tuple(PRESETS))
    ap.add_argument("--out", help="output path (default: stdout)")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--freq-ghz")
    ap.add_argument("--dist-m")
    ap.add_argument("--cn2", help="path C_n^2 in m^-2/3")
    ap.add_argument("--ground-cn2", help="terrestrial RISC A in m^-2/3")
    ap.add_argument("--wind", help="average wind speed in m/s")
    ap.add_argument("--alt-range", help="altitude sweep in m")
    ap.add_argument("--rytov-list")
    ap.add_argument("--intensity-range")
    ap.add_argument("--alpha")
    ap.add_argument("--beta")
    ap.add_argument("--n")
    ap.add_argument("--seed")
    ap.add_argument("--workers")
    ap.add_argument("--segments")
    ap.add_argument("--h-tx-m")
    ap.add_argument("--h-rx-m")
    ap.add_argument("--temperature-k")
    ap.add_argument("--pressure-pa")
    ap.add_argument("--vapour-pa")
    ap.add_argument("--rain-n0", help="drop-size intercept N0 in m^-4")
    ap.add_argument("--rain-rho0", help="drop-size slope rho0 in m^-1")
    ap.add_argument("--particle-index", help="complex particle refractive index, e.g. 2.2+1.1j")
    ap.add_argument("--absorption-table", help="CSV with header freq_hz,k_np_per_m")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    config_path = args.pop("config")
    file_values: dict[str, Any] = {}
    if config_path is not None:
        try:
            file_values = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            return _fail(EXIT_CONFIG, f"config: cannot read {config_path} ({exc})")
        if not isinstance(file_values, dict):
            return _fail(EXIT_CONFIG, "config: top level must be a JSON object")
    try:
        cfg = resolve_config(args, file_values)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc)
    if cfg.absorption_table is not None:
        try:
            load_absorption_table(cfg.absorption_table)
        except DataError as exc:
            return _fail(EXIT_DATA, exc)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
