"""Homogeneous-medium losses: water-vapour absorption, Mie scattering, free-space loss."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Union

import numpy as np
from scipy import integrate

from .errors import DataError, DomainError, NumericalError, OutOfRangeError
from .specfun import mie_coefficients
from .turbulence import C_LIGHT

NP_TO_DB = 4.343  # dB per neper of power attenuation
SAMPLE_TABLE = "sample_absorption_illustrative.csv"


@dataclass(frozen=True)
class AbsorptionTable:
    """Ground-level water-vapour absorption k(f) in Np/m and the vapour scale height."""

    freq_hz: np.ndarray
    k_np_per_m: np.ndarray
    H_w: float = 2000.0

    def __post_init__(self):
        f = np.asarray(self.freq_hz, dtype=float)
        k = np.asarray(self.k_np_per_m, dtype=float)
        object.__setattr__(self, "freq_hz", f)
        object.__setattr__(self, "k_np_per_m", k)
        if f.ndim != 1 or f.shape != k.shape or f.size < 2:
            raise DataError("absorption table needs matching 1-D columns with >= 2 rows")
        if not np.all(np.diff(f) > 0.0):
            raise DataError("absorption table frequencies must be strictly increasing")
        if np.any(k < 0.0) or not np.all(np.isfinite(k)):
            raise DataError("absorption coefficients must be finite and >= 0")
        if not self.H_w > 0.0:
            raise DomainError(f"scale height must be > 0, got {self.H_w}")

    def ground(self, f: float) -> float:
        """Interpolated ground coefficient; power-law between nodes, linear next to zeros."""
        lo, hi = self.freq_hz[0], self.freq_hz[-1]
        if not lo <= f <= hi:
            raise OutOfRangeError(
                f"frequency {f:g} Hz outside absorption table range [{lo:g}, {hi:g}] Hz"
            )
        i = int(np.searchsorted(self.freq_hz, f, side="right")) - 1
        i = min(i, self.freq_hz.size - 2)
        f1, f2 = self.freq_hz[i], self.freq_hz[i + 1]
        k1, k2 = self.k_np_per_m[i], self.k_np_per_m[i + 1]
        if f == f1:
            return float(k1)
        if k1 > 0.0 and k2 > 0.0:
            t = math.log(f / f1) / math.log(f2 / f1)
            return float(math.exp(math.log(k1) + t * math.log(k2 / k1)))
        return float(k1 + (f - f1) / (f2 - f1) * (k2 - k1))


def parse_absorption_csv(text: str, H_w: float = 2000.0, source: str = "<string>") -> AbsorptionTable:
    """Parse ``freq_hz,k_np_per_m`` CSV text; errors name the offending line."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"{source}: empty absorption table") from None
    if [h.strip() for h in header] != ["freq_hz", "k_np_per_m"]:
        raise DataError(f"{source}:1: expected header 'freq_hz,k_np_per_m', got {','.join(header)!r}")
    freqs, ks = [], []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise DataError(f"{source}:{line}: expected 2 columns, got {len(row)}")
        try:
            f, k = float(row[0]), float(row[1])
        except ValueError:
            raise DataError(f"{source}:{line}: non-numeric value in {row!r}") from None
        if not (math.isfinite(f) and math.isfinite(k)) or f <= 0.0 or k < 0.0:
            raise DataError(f"{source}:{line}: need f > 0 and k >= 0, got {row!r}")
        if freqs and f <= freqs[-1]:
            raise DataError(f"{source}:{line}: frequency {f:g} not strictly increasing")
        freqs.append(f)
        ks.append(k)
    if len(freqs) < 2:
        raise DataError(f"{source}: absorption table needs at least 2 data rows")
    return AbsorptionTable(np.array(freqs), np.array(ks), H_w)


def load_absorption_table(path: Union[str, Path], H_w: float = 2000.0) -> AbsorptionTable:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: cannot read absorption table ({exc})") from exc
    return parse_absorption_csv(text, H_w, source=str(path))


def sample_absorption_table(H_w: float = 2000.0) -> AbsorptionTable:
    """Bundled 0.1-1 THz grid (10 GHz steps). Illustrative only, not spectroscopic data."""
    text = resources.files("thzturb.data").joinpath(SAMPLE_TABLE).read_text(encoding="utf-8")
    return parse_absorption_csv(text, H_w, source=SAMPLE_TABLE)


def absorption_coefficient(f: float, h: float, table: AbsorptionTable) -> float:
    """Molecular absorption coefficient (Np/m) at frequency ``f`` and altitude ``h``."""
    if not h >= 0.0:
        raise DomainError(f"altitude must be >= 0 m, got {h}")
    return table.ground(f) * math.exp(-h / table.H_w)


RefractiveIndex = Union[complex, Callable[[float], complex]]


def _index_at(m_p: RefractiveIndex, f: float) -> complex:
    return complex(m_p(f) if callable(m_p) else m_p)


def mie_terms_needed(x: float) -> int:
    return math.ceil(x + 4.0 * x ** (1.0 / 3.0) + 2.0)


def mie_extinction_cross_section(r: float, f: float, m_p: complex, nterms: int | None = None) -> float:
    """Mie extinction cross-section (m^2) of a sphere of radius ``r`` at frequency ``f``.

    ``nterms`` overrides the default truncation ``ceil(x + 4 x^(1/3) + 2)``.
    """
    if not (r > 0.0 and f > 0.0 and math.isfinite(r) and math.isfinite(f)):
        raise DomainError(f"radius and frequency must be finite and > 0, got r={r}, f={f}")
    k = 2.0 * math.pi * f / C_LIGHT
    x = k * r
    M = mie_terms_needed(x) if nterms is None else nterms
    a, b = mie_coefficients(x, m_p, M)
    n = np.arange(1, M + 1)
    return float(2.0 * math.pi / k**2 * np.sum((2 * n + 1) * (a.real + b.real)))


@dataclass(frozen=True)
class DropSizeDistribution:
    """Exponential drop-size law N(r) = N0 exp(-rho0 r) (m^-4) with particle index ``m_p``.

    ``m_p`` may be a constant or a function of frequency. ``r_max`` defaults
    to ``10 / rho0``.
    """

    N0: float
    rho0: float
    m_p: RefractiveIndex
    r_max: float | None = None

    def __post_init__(self):
        if not self.N0 >= 0.0:
            raise DomainError(f"N0 must be >= 0, got {self.N0}")
        if not self.rho0 > 0.0:
            raise DomainError(f"rho0 must be > 0, got {self.rho0}")
        if self.r_max is None:
            object.__setattr__(self, "r_max", 10.0 / self.rho0)
        elif not self.r_max > 0.0:
            raise DomainError(f"r_max must be > 0, got {self.r_max}")
        if not callable(self.m_p) and complex(self.m_p).imag < 0.0:
            raise DomainError(f"particle index must have Im >= 0, got {self.m_p}")

    def density(self, r):
        return self.N0 * np.exp(-self.rho0 * np.asarray(r))


NO_RAIN = DropSizeDistribution(N0=0.0, rho0=4100.0, m_p=complex(1.0, 0.0))


def scattering_coefficient(dsd: DropSizeDistribution, f: float, rtol: float = 1e-6) -> float:
    """Mie scattering loss coefficient in dB/km, integrated over the drop sizes."""
    if not f > 0.0:
        raise DomainError(f"frequency must be > 0, got {f}")
    if dsd.N0 == 0.0:
        return 0.0
    m_p = _index_at(dsd.m_p, f)

    def integrand(r):
        if r <= 0.0:
            return 0.0
        return mie_extinction_cross_section(r, f, m_p) * dsd.N0 * math.exp(-dsd.rho0 * r)

    value, abserr, info, *rest = integrate.quad(
        integrand, 0.0, dsd.r_max, epsabs=0.0, epsrel=rtol, limit=500, full_output=True
    )
    if rest or not abserr <= rtol * abs(value):
        achieved = abserr / abs(value) if value else math.inf
        raise NumericalError(
            f"scattering integral did not reach rtol={rtol:g} (achieved {achieved:.3g})"
        )
    return NP_TO_DB * value * 1000.0


@dataclass(frozen=True)
class LossBreakdown:
    fspl_db: float
    abs_db: float
    sca_db: float
    total_db: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total_db", self.fspl_db + self.abs_db + self.sca_db)


def free_space_loss_db(f: float, L: float) -> float:
    return 20.0 * math.log10(4.0 * math.pi * f * L / C_LIGHT)


def total_loss_homogeneous(f: float, L: float, k_abs: float, k_sca_db_km: float) -> LossBreakdown:
    """Free-space, absorption (k_abs in Np/m) and scattering (dB/km) losses over ``L`` metres."""
    if not (f > 0.0 and L > 0.0):
        raise DomainError(f"frequency and path length must be > 0, got f={f}, L={L}")
    if not (k_abs >= 0.0 and k_sca_db_km >= 0.0):
        raise DomainError("attenuation coefficients must be >= 0")
    return LossBreakdown(
        fspl_db=free_space_loss_db(f, L),
        abs_db=NP_TO_DB * k_abs * L,
        sca_db=k_sca_db_km * (L / 1000.0),
    )
