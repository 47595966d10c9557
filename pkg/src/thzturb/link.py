"""End-to-end link budgets over slant paths and Monte Carlo fading runs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError
from .medium import (
    NO_RAIN,
    AbsorptionTable,
    DropSizeDistribution,
    LossBreakdown,
    absorption_coefficient,
    sample_absorption_table,
    scattering_coefficient,
    total_loss_homogeneous,
)
from .scintillation import (
    aperture_parameter,
    large_small_scale_params,
    sample_scintillation,
    scintillation_index,
    turbulence_attenuation,
)
from .turbulence import (
    DEFAULT_ENV,
    DEFAULT_MODEL,
    Environment,
    RefractivityModel,
    Regime,
    RiscParams,
    risc_thz,
    rytov_variance,
    turbulence_regime,
)

DEFAULT_SEGMENTS = 64
QUANTILES = (0.01, 0.05, 0.50, 0.95, 0.99)


@dataclass(frozen=True)
class LinkGeometry:
    """Transmitter/receiver altitudes (m), path length (m) and carrier frequency (Hz)."""

    h_tx: float
    h_rx: float
    L: float
    f: float

    def __post_init__(self):
        if not (self.h_tx >= 0.0 and self.h_rx >= 0.0):
            raise DomainError("altitudes must be >= 0 m")
        if not self.L > 0.0:
            raise DomainError(f"path length must be > 0, got {self.L}")
        if not self.f > 0.0:
            raise DomainError(f"frequency must be > 0, got {self.f}")
        if self.L < abs(self.h_tx - self.h_rx):
            raise DomainError(
                f"path length {self.L} m shorter than altitude difference {abs(self.h_tx - self.h_rx)} m"
            )

    def midpoints(self, segments: int) -> np.ndarray:
        t = (np.arange(segments) + 0.5) / segments
        return self.h_tx + t * (self.h_rx - self.h_tx)


@dataclass(frozen=True)
class LinkBudget:
    losses: LossBreakdown
    turbulence_db: float
    path_cn2: float
    sigma_R2: float
    regime: Regime
    D: float
    alpha: float
    beta: float
    segments: int

    @property
    def total_db(self) -> float:
        return self.losses.total_db + self.turbulence_db


def _path_mean(values: list[float]) -> float:
    if all(v == values[0] for v in values):
        return values[0]
    return math.fsum(values) / len(values)


def slant_path_budget(
    geom: LinkGeometry,
    risc: RiscParams = RiscParams(),
    env: Environment = DEFAULT_ENV,
    model: RefractivityModel = DEFAULT_MODEL,
    table: AbsorptionTable | None = None,
    dsd: DropSizeDistribution = NO_RAIN,
    segments: int = DEFAULT_SEGMENTS,
) -> LinkBudget:
    """Compose free-space, absorption, scattering and turbulence losses along a straight path.

    The path is cut into ``segments`` equal pieces. Absorption and C_n^2 are
    evaluated at each segment's midpoint altitude; the path C_n^2 is their
    arithmetic mean and feeds a single Rytov variance over the full length.
    Scattering is uniform along the path.
    """
    segments = int(segments)
    if segments < 1:
        raise DomainError(f"segments must be >= 1, got {segments}")
    table = sample_absorption_table() if table is None else table
    if geom.h_tx == geom.h_rx:
        heights = [float(geom.h_tx)]
    else:
        heights = [float(h) for h in geom.midpoints(segments)]

    k_abs = _path_mean([absorption_coefficient(geom.f, h, table) for h in heights])
    cn2 = _path_mean([risc_thz(h, risc, env, model) for h in heights])
    k_sca = scattering_coefficient(dsd, geom.f)
    losses = total_loss_homogeneous(geom.f, geom.L, k_abs, k_sca)

    s2 = rytov_variance(cn2, geom.f, geom.L)
    D = aperture_parameter(geom.f, geom.L)
    params = large_small_scale_params(s2, D)
    try:
        turb = turbulence_attenuation(s2, D)
    except SingularityError as exc:
        raise SingularityError(
            f"{exc} on a {segments}-segment path from {geom.h_tx} m to {geom.h_rx} m",
            segments=segments,
            midpoints=heights,
            path_cn2=cn2,
            **exc.context,
        ) from exc
    return LinkBudget(
        losses=losses,
        turbulence_db=turb,
        path_cn2=cn2,
        sigma_R2=s2,
        regime=turbulence_regime(s2),
        D=D,
        alpha=params.alpha,
        beta=params.beta,
        segments=segments,
    )


@dataclass(frozen=True)
class FadingReport:
    n: int
    seed: int
    alpha: float
    beta: float
    mean: float
    variance: float
    scintillation_index: float
    analytic_scintillation_index: float
    intensity_quantiles: dict[float, float]
    loss_db_quantiles: dict[float, float]


def monte_carlo_fading(
    budget: LinkBudget,
    alpha: float | None = None,
    beta: float | None = None,
    n: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> FadingReport:
    """Apply Gamma-Gamma fading to the mean received power of ``budget``.

    ``alpha`` and ``beta`` default to the budget's own turbulence parameters.
    The instantaneous loss is ``total_db - 10 log10(I)``.
    """
    n = int(n)
    if n < 100:
        raise DomainError(f"Monte Carlo needs n >= 100, got {n}")
    alpha = budget.alpha if alpha is None else alpha
    beta = budget.beta if beta is None else beta
    draws = sample_scintillation(alpha, beta, n, seed, workers=workers).samples
    loss = budget.total_db - 10.0 * np.log10(draws)
    mean = float(np.mean(draws))
    var = float(np.var(draws, ddof=1))
    qs = np.array(QUANTILES)
    return FadingReport(
        n=n,
        seed=int(seed),
        alpha=alpha,
        beta=beta,
        mean=mean,
        variance=var,
        scintillation_index=var / mean**2,
        analytic_scintillation_index=scintillation_index(alpha, beta),
        intensity_quantiles=dict(zip(QUANTILES, map(float, np.quantile(draws, qs)))),
        loss_db_quantiles=dict(zip(QUANTILES, map(float, np.quantile(loss, qs)))),
    )
