"""Gamma-Gamma scintillation: Andrews alpha/beta, densities, sampling, attenuation.

The normalized intensity is the product ``I = I_a * I_b`` of two independent
unit-mean Gamma variates with shapes ``alpha`` (large-scale eddies) and
``beta`` (small-scale eddies).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError, NumericalError, SingularityError
from .specfun import log_bessel_k
from .turbulence import wavenumber

CHUNK_SIZE = 1 << 16
_SINGULAR_GAP = 1e-12


@dataclass(frozen=True)
class ScintillationParams:
    sigma_R2: float
    D: float
    alpha: float
    beta: float

    @property
    def no_turbulence(self) -> bool:
        """True when sigma_R2 == 0, where alpha and beta are infinite."""
        return self.sigma_R2 == 0.0


@dataclass(frozen=True)
class LimitingDistribution:
    """One of the single-parameter limiting laws.

    ``param`` is sigma_I^2 for ``"log-normal"``, alpha for ``"K"`` and the
    mean ``b`` for ``"exponential"``.
    """

    kind: Literal["log-normal", "K", "exponential"]
    param: float

    def __post_init__(self):
        if self.kind not in ("log-normal", "K", "exponential"):
            raise DomainError(f"unknown limiting distribution {self.kind!r}")
        if not self.param > 0.0:
            raise DomainError(f"{self.kind} parameter must be > 0, got {self.param}")


@dataclass(frozen=True)
class ScintillationSampleSet:
    samples: np.ndarray
    seed: int
    alpha: float
    beta: float


def _check_shapes(alpha: float, beta: float) -> None:
    for name, v in (("alpha", alpha), ("beta", beta)):
        if not (v > 0.0 and math.isfinite(v)):
            raise DomainError(f"{name} must be finite and > 0, got {v}")


def aperture_parameter(f: float, L: float) -> float:
    """Aperture parameter D = sqrt(k l^2 / 4L) for an isotropic-area aperture l = lambda/pi."""
    if not (f > 0.0 and L > 0.0):
        raise DomainError(f"frequency and path length must be > 0, got f={f}, L={L}")
    k = wavenumber(f)
    l_ra = 2.0 / k  # lambda / pi
    return math.sqrt(k * l_ra**2 / (4.0 * L))


def _alpha_exponent(s2: float, D: float) -> float:
    s125 = s2 ** 1.2  # sigma_R^(12/5)
    return 0.49 * s2 / (1.0 + 0.18 * D**2 + 0.56 * s125) ** (7.0 / 6.0)


def _beta_exponent(s2: float, D: float) -> float:
    s125 = s2 ** 1.2
    return (
        0.51 * s2 * (1.0 + 0.69 * D**2 * s125) ** (-5.0 / 6.0)
        / (1.0 + 0.9 * D**2 + 0.62 * s125) ** (7.0 / 6.0)
    )


def large_small_scale_params(sigma_R2: float, D: float = 0.0) -> ScintillationParams:
    """Andrews' effective numbers of large- and small-scale cells.

    ``sigma_R2 == 0`` yields ``alpha = beta = inf`` with ``no_turbulence`` set.
    """
    if not sigma_R2 >= 0.0:
        raise DomainError(f"Rytov variance must be >= 0, got {sigma_R2}")
    if not D >= 0.0:
        raise DomainError(f"aperture parameter must be >= 0, got {D}")
    if sigma_R2 == 0.0:
        return ScintillationParams(0.0, D, math.inf, math.inf)
    alpha = 1.0 / math.expm1(_alpha_exponent(sigma_R2, D))
    beta = 1.0 / math.expm1(_beta_exponent(sigma_R2, D))
    return ScintillationParams(sigma_R2, D, alpha, beta)


def scintillation_index(alpha: float, beta: float) -> float:
    """Variance of the unit-mean Gamma-Gamma intensity, 1/a + 1/b + 1/(ab)."""
    if not (alpha > 0.0 and beta > 0.0):
        raise DomainError(f"shapes must be > 0, got alpha={alpha}, beta={beta}")
    return 1.0 / alpha + 1.0 / beta + 1.0 / (alpha * beta)


def _log_gg_pdf(I: float, alpha: float, beta: float) -> float:
    ab = alpha * beta
    half = 0.5 * (alpha + beta)
    return (
        math.log(2.0)
        + half * math.log(ab)
        - math.lgamma(alpha)
        - math.lgamma(beta)
        + (half - 1.0) * math.log(I)
        + log_bessel_k(alpha - beta, 2.0 * math.sqrt(ab * I))
    )


def _pointwise(fn, I):
    if np.ndim(I) == 0:
        return fn(float(I))
    arr = np.asarray(I, dtype=float)
    return np.array([fn(v) for v in arr.ravel()]).reshape(arr.shape)


def gamma_gamma_pdf(I, alpha: float, beta: float):
    """Gamma-Gamma density of the normalized intensity.

    Evaluated in log space so that large shapes (weak turbulence) neither
    overflow the normalizing constant nor underflow the Bessel factor.
    Accepts a scalar or an array of intensities.
    """
    _check_shapes(alpha, beta)

    def one(v):
        if not v > 0.0:
            raise DomainError(f"intensity must be > 0, got {v}")
        return math.exp(_log_gg_pdf(v, alpha, beta))

    return _pointwise(one, I)


def _k_dist_pdf(I: float, alpha: float) -> float:
    log_p = (
        math.log(2.0 * alpha)
        - math.lgamma(alpha)
        + 0.5 * (alpha - 1.0) * math.log(alpha * I)
        + log_bessel_k(alpha - 1.0, 2.0 * math.sqrt(alpha * I))
    )
    return math.exp(log_p)


def limiting_pdf(dist: LimitingDistribution, I):
    """Density of a limiting law (log-normal, K or exponential)."""
    p = dist.param

    def one(v):
        if not v > 0.0:
            raise DomainError(f"intensity must be > 0, got {v}")
        if dist.kind == "log-normal":
            return math.exp(-math.log(v) ** 2 / (2.0 * p)) / (math.sqrt(2.0 * math.pi * p) * v)
        if dist.kind == "K":
            return _k_dist_pdf(v, p)
        return math.exp(-v / p) / p

    return _pointwise(one, I)


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for substream ``index`` of a root seed, independent of scheduling."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def _sample_chunk(alpha: float, beta: float, seed: int, index: int, size: int) -> np.ndarray:
    rng = substream(seed, index)
    ia = rng.gamma(alpha, 1.0 / alpha, size)
    ib = rng.gamma(beta, 1.0 / beta, size)
    return ia * ib


def sample_scintillation(
    alpha: float, beta: float, n: int, seed: int, workers: int = 1
) -> ScintillationSampleSet:
    """Draw ``n`` Gamma-Gamma intensities as products of unit-mean Gamma variates.

    Draws are generated in fixed-size chunks, chunk ``c`` from substream
    ``(seed, c)``, so the output is identical for any ``workers`` count.
    """
    _check_shapes(alpha, beta)
    seed = _check_seed(seed)
    n = int(n)
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    sizes = [min(CHUNK_SIZE, n - start) for start in range(0, n, CHUNK_SIZE)]
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda c: _sample_chunk(alpha, beta, seed, c, sizes[c]), range(len(sizes)))
            )
    else:
        parts = [_sample_chunk(alpha, beta, seed, c, s) for c, s in enumerate(sizes)]
    samples = np.concatenate(parts)
    if not np.all(samples > 0.0):
        raise NumericalError(
            f"Gamma variates underflowed to zero for alpha={alpha}, beta={beta}"
        )
    return ScintillationSampleSet(samples, seed, alpha, beta)


def _attenuation_db(si: float, sigma_R2: float) -> float:
    gap = abs(1.0 - math.sqrt(si))
    if gap < _SINGULAR_GAP:
        raise SingularityError(
            f"turbulence attenuation is singular at sigma_R2={sigma_R2} (sigma_I2={si})",
            sigma_R2=sigma_R2,
            sigma_I2=si,
        )
    return -10.0 * math.log10(gap)


def turbulence_attenuation(sigma_R2: float, D: float = 0.0) -> float:
    """Turbulence attenuation in dB, reported as a positive loss.

    Raises :class:`SingularityError` where the scintillation index equals one.
    """
    params = large_small_scale_params(sigma_R2, D)
    if params.no_turbulence:
        return 0.0
    return _attenuation_db(scintillation_index(params.alpha, params.beta), sigma_R2)


def turbulence_attenuation_expanded(sigma_R2: float, D: float = 0.0) -> float:
    """Same quantity as :func:`turbulence_attenuation`, written directly in sigma_R2.

    Uses ``(e^a - 1) + (e^b - 1) + (e^a - 1)(e^b - 1)`` for the scintillation index
    without forming alpha and beta.
    """
    if not sigma_R2 >= 0.0:
        raise DomainError(f"Rytov variance must be >= 0, got {sigma_R2}")
    if sigma_R2 == 0.0:
        return 0.0
    ea = math.expm1(_alpha_exponent(sigma_R2, D))
    eb = math.expm1(_beta_exponent(sigma_R2, D))
    return _attenuation_db(ea + eb + ea * eb, sigma_R2)
