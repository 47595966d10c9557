"""Turbulence strength: structure functions, altitude RISC profiles, Rytov variance."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

from .errors import DomainError, SingularityError, ValidityError

C_LIGHT = 299_792_458.0  # m/s


@dataclass(frozen=True)
class EnvironmentState:
    """Thermodynamic state at a point: T in K, total pressure P and vapour pressure e in Pa."""

    T: float = 288.15
    P: float = 101_325.0
    e: float = 1_170.0

    def __post_init__(self):
        if not 150.0 < self.T < 350.0:
            raise DomainError(f"temperature must lie in (150, 350) K, got {self.T}")
        if not self.P > 0.0:
            raise DomainError(f"pressure must be > 0 Pa, got {self.P}")
        if not 0.0 <= self.e < self.P:
            raise DomainError(f"vapour pressure must satisfy 0 <= e < P, got e={self.e}, P={self.P}")


@dataclass(frozen=True)
class RiscParams:
    """Hufnagel-Valley profile parameters: ground RISC ``A`` (m^-2/3) and wind speed ``v`` (m/s)."""

    A: float = 1.7e-14
    v: float = 21.0

    def __post_init__(self):
        if not self.A > 0.0:
            raise DomainError(f"terrestrial RISC A must be > 0, got {self.A}")
        if not self.v >= 0.0:
            raise DomainError(f"wind speed v must be >= 0, got {self.v}")


@dataclass(frozen=True)
class TurbulenceScales:
    """Eddy scale range and structure constants.

    ``C_T2`` is carried in K^2 m^-2/3 and ``C_n2`` in m^-2/3.
    """

    l0: float = 5.0e-3
    L0: float = 20.0
    C_T2: float = 0.0
    C_n2: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.l0 < self.L0:
            raise DomainError(f"scales must satisfy 0 < l0 < L0, got l0={self.l0}, L0={self.L0}")
        if self.C_T2 < 0.0 or self.C_n2 < 0.0:
            raise DomainError("structure constants must be non-negative")


def _dn_dT_visible(env: EnvironmentState) -> float:
    # n - 1 = 77.6e-6 * P_hPa / T
    return -77.6e-6 * (env.P / 100.0) / env.T**2


def _dn_dT_radio(env: EnvironmentState) -> float:
    # n - 1 = 77.6e-6 / T * (P_hPa + 4810 * e_hPa / T)
    p_hpa, e_hpa = env.P / 100.0, env.e / 100.0
    return -77.6e-6 * (p_hpa / env.T**2 + 2.0 * 4810.0 * e_hpa / env.T**3)


@dataclass(frozen=True)
class RefractivityModel:
    """Temperature derivatives of the refractive index in the visible and THz bands.

    The default pairs a dry-air optical refractivity with the Smith-Weintraub
    radio refractivity; either mapping can be swapped for a measured relation.
    """

    dn_dT_vis: Callable[[EnvironmentState], float] = field(default=_dn_dT_visible)
    dn_dT_thz: Callable[[EnvironmentState], float] = field(default=_dn_dT_radio)


DEFAULT_MODEL = RefractivityModel()
DEFAULT_ENV = EnvironmentState()

# an environment may be a fixed state or a function of altitude (m)
Environment = Union[EnvironmentState, Callable[[float], EnvironmentState]]


def _structure_fn(L_ij: float, coeff: float, scales: TurbulenceScales) -> float:
    if not L_ij > 0.0:
        raise DomainError(f"separation must be > 0, got {L_ij}")
    if L_ij >= scales.L0:
        raise ValidityError(
            f"separation {L_ij} m is not below the outer scale L0={scales.L0} m; "
            "the 2/3 law does not apply"
        )
    if L_ij <= scales.l0:
        return coeff * scales.l0 ** (-4.0 / 3.0) * L_ij**2
    return coeff * L_ij ** (2.0 / 3.0)


def structure_fn_temperature(L_ij: float, scales: TurbulenceScales) -> float:
    """Temperature structure function D_TT at separation ``L_ij`` (K^2)."""
    return _structure_fn(L_ij, scales.C_T2, scales)


def structure_fn_refractive(L_ij: float, scales: TurbulenceScales) -> float:
    """Refractive-index structure function D_nn at separation ``L_ij`` (dimensionless)."""
    return _structure_fn(L_ij, scales.C_n2, scales)


def risc_visible(h: float, params: RiscParams) -> float:
    """Hufnagel-Valley C_n^2(h) for the visible band, in m^-2/3."""
    if not h >= 0.0:
        raise DomainError(f"altitude must be >= 0 m, got {h}")
    return (
        0.00594 * (params.v / 27.0) ** 2 * (1e-5 * h) ** 10 * math.exp(-h / 1000.0)
        + 2.7e-16 * math.exp(-h / 1500.0)
        + params.A * math.exp(-h / 100.0)
    )


def dn_dt_ratio(env: EnvironmentState, model: RefractivityModel = DEFAULT_MODEL) -> float:
    """Squared ratio of THz to visible refractive-index temperature sensitivity."""
    vis = model.dn_dT_vis(env)
    thz = model.dn_dT_thz(env)
    if vis == 0.0 or not math.isfinite(vis):
        raise SingularityError(f"visible-band dn/dT is {vis} at {env}", env=env)
    return (thz / vis) ** 2


def _env_at(env: Environment, h: float) -> EnvironmentState:
    return env if isinstance(env, EnvironmentState) else env(h)


def risc_thz(
    h: float,
    params: RiscParams,
    env: Environment = DEFAULT_ENV,
    model: RefractivityModel = DEFAULT_MODEL,
) -> float:
    """THz-band C_n^2(h): the visible profile scaled by :func:`dn_dt_ratio`.

    ``env`` is normally a single state; pass a callable ``h -> EnvironmentState``
    to evaluate the band transform at each altitude instead.
    """
    return risc_visible(h, params) * dn_dt_ratio(_env_at(env, h), model)


def wavenumber(f: float) -> float:
    return 2.0 * math.pi * f / C_LIGHT


def rytov_variance(C_n2: float, f: float, L: float) -> float:
    """Rytov variance 0.5 C_n^2 k^(7/6) L^(11/6)."""
    if not C_n2 >= 0.0:
        raise DomainError(f"C_n2 must be >= 0, got {C_n2}")
    if not (f > 0.0 and L > 0.0):
        raise DomainError(f"frequency and path length must be > 0, got f={f}, L={L}")
    return 0.5 * C_n2 * wavenumber(f) ** (7.0 / 6.0) * L ** (11.0 / 6.0)


class Regime(str, enum.Enum):
    WEAK = "weak"
    STRONG = "strong"
    SATURATED = "saturated"


def turbulence_regime(sigma_R2: float) -> Regime:
    """Classify turbulence strength; both boundaries 0.1 and 10 count as strong."""
    if not sigma_R2 >= 0.0:
        raise DomainError(f"Rytov variance must be >= 0, got {sigma_R2}")
    if sigma_R2 < 0.1:
        return Regime.WEAK
    if sigma_R2 <= 10.0:
        return Regime.STRONG
    return Regime.SATURATED
