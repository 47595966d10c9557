"""Special functions: Gamma, modified Bessel K of real order, Mie coefficients.

The Bessel routine follows the classic Temme / Steed construction: the order
is split as ``nu = mu + n`` with ``|mu| <= 1/2``, ``K_mu`` and ``K_{mu+1}`` are
obtained from Temme's series (``x < 2``) or Steed's continued fraction CF2
(``x >= 2``), and the result is carried up to ``nu`` by forward recurrence,
which is stable for K. Values are tracked as ``mantissa * exp(log_scale)`` so
large orders and large arguments neither overflow nor lose precision before
the caller decides how to represent the result.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError, UnderflowWarning

MAX_ORDER = 1.0e4

_EPS = 1.0e-16
_MAX_ITER = 100_000
_RESCALE = 1.0e280
_LOG_RESCALE = math.log(_RESCALE)

# Taylor coefficients (even powers of mu) of
#   gam1(mu) = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),
# generated at 40 digits; the series is used on |mu| <= 1/2.
_GAM1_TAYLOR = (
    -0.57721566490153286061,
    0.042002635034095235529,
    0.042197734555544336748,
    -0.0072189432466630995424,
    0.00021524167411495097282,
    0.000020134854780788238656,
    -1.1330272319816958824e-6,
    -6.1160951044814158179e-9,
    1.1812745704870201446e-9,
    -7.782263439905071254e-12,
    -5.100370287454475979e-13,
    5.3481225394230179824e-15,
    1.1812593016974587695e-16,
)


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma_fn requires finite x > 0, got {x!r}")
    return math.gamma(x)


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or abs(nu) > MAX_ORDER:
        raise DomainError(f"Bessel order must be finite with |nu| <= {MAX_ORDER:g}, got {nu!r}")
    return abs(nu)


def _check_arg(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"Bessel argument must be finite and > 0, got {x!r}")
    return x


def _gam1(mu: float) -> float:
    mu2 = mu * mu
    acc = 0.0
    for c in reversed(_GAM1_TAYLOR):
        acc = acc * mu2 + c
    return acc


def _temme(mu: float, x: float) -> tuple[float, float]:
    """K_mu(x), K_{mu+1}(x) for |mu| <= 1/2 and 0 < x < 2."""
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if pimu == 0.0 else pimu / math.sin(pimu)
    d = -math.log(x2)
    e = mu * d
    fact2 = 1.0 if e == 0.0 else math.sinh(e) / e
    gampl = 1.0 / math.gamma(1.0 + mu)
    gammi = 1.0 / math.gamma(1.0 - mu)
    gam1 = _gam1(mu)
    gam2 = 0.5 * (gammi + gampl)

    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    e = math.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = 1.0
    d = x2 * x2
    total1 = p
    mu2 = mu * mu
    for i in range(1, _MAX_ITER):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        term = c * ff
        total += term
        total1 += c * (p - i * ff)
        if abs(term) < abs(total) * _EPS:
            return total, total1 * 2.0 / x
    raise NumericalError(f"Temme series did not converge (mu={mu}, x={x})")


def _steed(mu: float, x: float) -> tuple[float, float]:
    """exp(x)*K_mu(x), exp(x)*K_{mu+1}(x) for |mu| <= 1/2 and x >= 2."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, _MAX_ITER):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            h *= a1
            kmu = math.sqrt(math.pi / (2.0 * x)) / s
            return kmu, kmu * (mu + x + 0.5 - h) / x
    raise NumericalError(f"Steed continued fraction did not converge (mu={mu}, x={x})")


def _bessel_k_parts(nu: float, x: float) -> tuple[float, float]:
    """Return (mantissa, log_scale) with K_nu(x) = mantissa * exp(log_scale)."""
    n = int(nu + 0.5)
    mu = nu - n
    if x < 2.0:
        kmu, k1 = _temme(mu, x)
        log_scale = 0.0
    else:
        kmu, k1 = _steed(mu, x)
        log_scale = -x
    two_over_x = 2.0 / x
    for i in range(1, n + 1):
        kmu, k1 = k1, (mu + i) * two_over_x * k1 + kmu
        if k1 > _RESCALE:
            kmu /= _RESCALE
            k1 /= _RESCALE
            log_scale += _LOG_RESCALE
    return kmu, log_scale


def log_bessel_k(nu: float, x: float) -> float:
    """Natural logarithm of K_nu(x); finite wherever K_nu(x) is."""
    nu = _check_order(nu)
    x = _check_arg(x)
    mant, log_scale = _bessel_k_parts(nu, x)
    return math.log(mant) + log_scale


def bessel_k(nu: float, x: float, scaled: bool = False) -> float:
    """Modified Bessel function of the second kind, K_nu(x), for real order.

    Parameters
    ----------
    nu : float
        Real order; ``K_{-nu} = K_nu``.
    x : float
        Positive argument.
    scaled : bool
        Return ``exp(x) * K_nu(x)`` instead.

    Returns
    -------
    float
        The function value. If the true value is below the smallest positive
        double, 0.0 is returned and an :class:`UnderflowWarning` is issued.
    """
    nu = _check_order(nu)
    x = _check_arg(x)
    mant, log_scale = _bessel_k_parts(nu, x)
    if scaled:
        log_scale += x
    if -700.0 <= log_scale <= 700.0:
        value = mant * math.exp(log_scale)
    else:
        log_value = math.log(mant) + log_scale
        value = math.inf if log_value > 709.78 else math.exp(log_value)
    if value == 0.0:
        warnings.warn(
            f"K_{nu}({x}) underflows double precision; returning 0",
            UnderflowWarning,
            stacklevel=2,
        )
    return value


@dataclass(frozen=True)
class MieSeriesTerm:
    """One term of the Mie series: index and the electric/magnetic coefficients."""

    m: int
    a_m: complex
    b_m: complex


def _downward_start(x: float, m: complex, nterms: int) -> int:
    start = nterms + 15 + math.ceil(x)
    # the log-derivative recurrence needs to start beyond |m x|
    return max(start, math.ceil(abs(m * x)) + 15)


def mie_coefficients(x: float, m: complex, nterms: int) -> tuple[np.ndarray, np.ndarray]:
    """Mie coefficients a_n, b_n for n = 1..nterms as complex arrays.

    The logarithmic derivative D_n(mx) comes from downward recurrence seeded
    with zero; psi_n and chi_n of the real size parameter use upward
    recurrence. Sign convention: xi_n = psi_n - i chi_n, so Re(a_n), Re(b_n)
    lie in [0, 1] for passive spheres.
    """
    x = float(x)
    m = complex(m)
    nterms = int(nterms)
    if not (math.isfinite(x) and math.isfinite(m.real) and math.isfinite(m.imag)):
        raise DomainError(f"non-finite Mie input x={x!r}, m={m!r}")
    if x <= 0.0:
        raise DomainError(f"size parameter must be > 0, got {x!r}")
    if m.imag < 0.0:
        raise DomainError(f"refractive index must have Im(m) >= 0, got {m!r}")
    if nterms < 1:
        raise DomainError(f"truncation must be >= 1, got {nterms}")

    mx = m * x
    start = _downward_start(x, m, nterms)
    logd = [0j] * (start + 1)
    for n in range(start, 0, -1):
        r = n / mx
        logd[n - 1] = r - 1.0 / (logd[n] + r)

    a = np.empty(nterms, dtype=complex)
    b = np.empty(nterms, dtype=complex)
    psi0, psi1 = math.cos(x), math.sin(x)
    chi0, chi1 = -math.sin(x), math.cos(x)
    xi1 = complex(psi1, -chi1)
    for n in range(1, nterms + 1):
        f = (2.0 * n - 1.0) / x
        psi = f * psi1 - psi0
        chi = f * chi1 - chi0
        xi = complex(psi, -chi)
        dn = logd[n]
        nx = n / x
        ta = dn / m + nx
        tb = m * dn + nx
        a[n - 1] = (ta * psi - psi1) / (ta * xi - xi1)
        b[n - 1] = (tb * psi - psi1) / (tb * xi - xi1)
        psi0, psi1 = psi1, psi
        chi0, chi1 = chi1, chi
        xi1 = complex(psi1, -chi1)
    return a, b


def riccati_bessel(x: float, m: complex, M: int) -> list[MieSeriesTerm]:
    """Mie series terms m = 1..M built from Riccati-Bessel recurrences."""
    a, b = mie_coefficients(x, m, M)
    return [MieSeriesTerm(i + 1, complex(a[i]), complex(b[i])) for i in range(len(a))]
