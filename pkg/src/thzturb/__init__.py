"""Turbulence, scintillation and attenuation models for THz UAV line-of-sight links."""
__version__ = "0.1.0"

from .errors import (
    DataError,
    DomainError,
    NumericalError,
    OutOfRangeError,
    SingularityError,
    UnderflowWarning,
    ValidityError,
)
from .link import FadingReport, LinkBudget, LinkGeometry, monte_carlo_fading, slant_path_budget
from .medium import (
    AbsorptionTable,
    DropSizeDistribution,
    LossBreakdown,
    absorption_coefficient,
    load_absorption_table,
    mie_extinction_cross_section,
    sample_absorption_table,
    scattering_coefficient,
    total_loss_homogeneous,
)
from .scintillation import (
    LimitingDistribution,
    ScintillationParams,
    ScintillationSampleSet,
    aperture_parameter,
    gamma_gamma_pdf,
    large_small_scale_params,
    limiting_pdf,
    sample_scintillation,
    scintillation_index,
    turbulence_attenuation,
)
from .specfun import MieSeriesTerm, bessel_k, gamma_fn, log_bessel_k, riccati_bessel
from .turbulence import (
    EnvironmentState,
    RefractivityModel,
    Regime,
    RiscParams,
    TurbulenceScales,
    dn_dt_ratio,
    risc_thz,
    risc_visible,
    rytov_variance,
    structure_fn_refractive,
    structure_fn_temperature,
    turbulence_regime,
)
