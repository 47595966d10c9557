"""Independent reference computations used by the test-suite."""
import math

import mpmath as mp
import numpy as np
from scipy import integrate

from thzturb.scintillation import gamma_gamma_pdf

_SPLITS = (0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, 8.0, 16.0, np.inf)


def gg_moment(k, alpha, beta):
    """k-th raw moment of the Gamma-Gamma density by adaptive quadrature."""
    total = 0.0
    for lo, hi in zip(_SPLITS[:-1], _SPLITS[1:]):
        v, _ = integrate.quad(
            lambda I: I**k * gamma_gamma_pdf(I, alpha, beta) if I > 0 else 0.0,
            lo, hi, epsabs=1e-14, epsrel=1e-12, limit=500,
        )
        total += v
    return total


def density_integral(pdf, lo=0.0, hi=np.inf):
    splits = [s for s in _SPLITS if lo <= s <= hi]
    total = 0.0
    for a, b in zip(splits[:-1], splits[1:]):
        v, _ = integrate.quad(lambda I: pdf(I) if I > 0 else 0.0, a, b,
                              epsabs=1e-14, epsrel=1e-12, limit=500)
        total += v
    return total


def gg_cdf_table(alpha, beta, i_max=40.0, n_nodes=40001):
    """Nodes and cumulative probabilities of the Gamma-Gamma law from its density.

    Integrated on a uniform grid in u = sqrt(I), which removes the root-type
    behaviour of the density at the origin.
    """
    u = np.linspace(0.0, math.sqrt(i_max), n_nodes)
    g = np.empty_like(u)
    g[0] = 0.0 if 2 * min(alpha, beta) > 1 else np.nan
    g[1:] = 2.0 * u[1:] * gamma_gamma_pdf(u[1:] ** 2, alpha, beta)
    cdf = integrate.cumulative_simpson(g, x=u, initial=0.0)
    return u**2, cdf


def riccati_psi(n, z):
    return mp.sqrt(mp.pi * z / 2) * mp.besselj(n + mp.mpf(1) / 2, z)


def riccati_chi(n, z):
    return -mp.sqrt(mp.pi * z / 2) * mp.bessely(n + mp.mpf(1) / 2, z)


def mie_direct(x, m, nterms, dps=40):
    """a_n, b_n straight from the Riccati-Bessel definitions in extended precision."""
    with mp.workdps(dps):
        x = mp.mpf(x)
        m = mp.mpc(m)
        mx = m * x
        out = []
        for n in range(1, nterms + 1):
            px, px1 = riccati_psi(n, x), riccati_psi(n - 1, x)
            cx, cx1 = riccati_chi(n, x), riccati_chi(n - 1, x)
            pm, pm1 = riccati_psi(n, mx), riccati_psi(n - 1, mx)
            xi, xi1 = px - 1j * cx, px1 - 1j * cx1
            dpx = px1 - n * px / x
            dxi = xi1 - n * xi / x
            dpm = pm1 - n * pm / mx
            a = (m * pm * dpx - px * dpm) / (m * pm * dxi - xi * dpm)
            b = (pm * dpx - m * px * dpm) / (pm * dxi - m * xi * dpm)
            out.append((complex(a), complex(b)))
        return out


def rayleigh_a1(x, m):
    """Small-sphere expansion of a_1 through order x^6."""
    K = (m * m - 1) / (m * m + 2)
    return (-2j * x**3 / 3 * K
            - 2j * x**5 / 5 * (m * m - 2) * (m * m - 1) / (m * m + 2) ** 2
            + 4 * x**6 / 9 * K * K)


def rayleigh_qext(x, m):
    K = (m * m - 1) / (m * m + 2)
    return 4 * x * K.imag + 8.0 / 3.0 * x**4 * (K * K).real


def variance_standard_error(samples):
    """Standard error of the sample variance from the fourth central moment."""
    d = samples - samples.mean()
    m2 = np.mean(d**2)
    m4 = np.mean(d**4)
    return math.sqrt((m4 - m2**2) / samples.size)
