import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize, stats

from thzturb.errors import DomainError, SingularityError
from thzturb.scintillation import (
    LimitingDistribution,
    aperture_parameter,
    gamma_gamma_pdf,
    large_small_scale_params,
    limiting_pdf,
    sample_scintillation,
    scintillation_index,
    turbulence_attenuation,
    turbulence_attenuation_expanded,
)
from thzturb.turbulence import C_LIGHT

from oracles import density_integral, gg_cdf_table, gg_moment, variance_standard_error

# 15-digit mpmath evaluation of the Andrews formulas at D = 0
ANDREWS_D0 = {
    0.1: (20.7558139839771, 20.0096802571844),
    1.0: (2.9528641472325, 2.96659498836852),
    10.0: (2.48018553412081, 2.68371575535522),
}


class TestApertureParameter:
    @given(st.floats(1e10, 1e13), st.floats(1.0, 1e6))
    def test_reduced_form(self, f, L):
        lam = C_LIGHT / f
        assert aperture_parameter(f, L) == pytest.approx(math.sqrt(lam / (2 * math.pi * L)), rel=1e-15)

    def test_direct_value(self):
        lam = C_LIGHT / 300e9
        assert aperture_parameter(300e9, 1000.0) == pytest.approx(math.sqrt(lam / (2 * math.pi * 1000.0)), rel=1e-15)
        assert aperture_parameter(300e9, 1000.0) == pytest.approx(math.sqrt(0.001 / (2 * math.pi * 1000)), rel=1e-3)

    def test_vanishes_for_long_paths(self):
        assert aperture_parameter(300e9, 1e30) < 1e-16

    def test_domain(self):
        with pytest.raises(DomainError):
            aperture_parameter(0.0, 1.0)


class TestAndrewsParameters:
    @pytest.mark.parametrize("s2, alpha_reported", [(1.0, 2.95), (10.0, 2.48), (0.1, 20.76)])
    def test_alpha_matches_reported(self, s2, alpha_reported):
        assert large_small_scale_params(s2, 0.0).alpha == pytest.approx(alpha_reported, rel=5e-3)

    @pytest.mark.parametrize("s2", sorted(ANDREWS_D0))
    def test_against_frozen_evaluation(self, s2):
        p = large_small_scale_params(s2, 0.0)
        a, b = ANDREWS_D0[s2]
        assert p.alpha == pytest.approx(a, rel=1e-13)
        assert p.beta == pytest.approx(b, rel=1e-13)

    def test_no_turbulence(self):
        p = large_small_scale_params(0.0, 0.3)
        assert p.no_turbulence
        assert math.isinf(p.alpha) and math.isinf(p.beta)
        assert scintillation_index(p.alpha, p.beta) == 0.0

    @given(st.floats(1e-8, 1e4), st.floats(0.0, 10.0))
    def test_positive_finite(self, s2, D):
        p = large_small_scale_params(s2, D)
        assert 0 < p.alpha < math.inf and 0 < p.beta < math.inf

    def test_domain(self):
        with pytest.raises(DomainError):
            large_small_scale_params(-1.0)
        with pytest.raises(DomainError):
            large_small_scale_params(1.0, -0.1)


class TestGammaGammaPdf:
    @pytest.mark.parametrize("alpha", [1.5, 2.48, 8.0])
    def test_k_distribution_at_beta_one(self, alpha):
        K = LimitingDistribution("K", alpha)
        for I in (0.1, 0.5, 1.0, 2.0, 5.0):
            assert gamma_gamma_pdf(I, alpha, 1.0) == pytest.approx(limiting_pdf(K, I), rel=1e-10)

    @pytest.mark.parametrize("s2", [0.01, 0.1, 1.0, 10.0, 100.0])
    @pytest.mark.parametrize("D", [0.0, 0.5, 1.0])
    def test_moments(self, s2, D):
        p = large_small_scale_params(s2, D)
        assert gg_moment(0, p.alpha, p.beta) == pytest.approx(1.0, abs=1e-6)
        assert gg_moment(1, p.alpha, p.beta) == pytest.approx(1.0, abs=1e-6)
        assert gg_moment(2, p.alpha, p.beta) - 1 == pytest.approx(scintillation_index(p.alpha, p.beta), abs=1e-6)

    def test_array_input(self):
        I = np.array([[0.5, 1.0], [1.5, 2.0]])
        out = gamma_gamma_pdf(I, 3.0, 2.0)
        assert out.shape == (2, 2)
        assert out[0, 1] == gamma_gamma_pdf(1.0, 3.0, 2.0)

    def test_symmetric_in_shapes(self):
        for I in (0.2, 1.0, 3.0):
            assert gamma_gamma_pdf(I, 4.2, 1.7) == pytest.approx(gamma_gamma_pdf(I, 1.7, 4.2), rel=1e-13)

    def test_large_shapes_do_not_overflow(self):
        v = gamma_gamma_pdf(1.0, 5000.0, 4800.0)
        assert math.isfinite(v) and v > 0

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_gamma_pdf(0.0, 2.0, 2.0)
        with pytest.raises(DomainError):
            gamma_gamma_pdf(1.0, -2.0, 2.0)

    def test_weak_turbulence_close_to_lognormal(self):
        p = large_small_scale_params(0.01, 0.0)
        ln = LimitingDistribution("log-normal", scintillation_index(p.alpha, p.beta))
        I = np.linspace(0.5, 1.5, 1001)
        gap = np.max(np.abs(gamma_gamma_pdf(I, p.alpha, p.beta) - limiting_pdf(ln, I)))
        assert gap < 0.02


class TestLimitingPdf:
    def test_exponential_at_origin(self):
        assert limiting_pdf(LimitingDistribution("exponential", 1.0), 1e-300) == pytest.approx(1.0)

    def test_lognormal_at_one(self):
        s = 0.3
        assert limiting_pdf(LimitingDistribution("log-normal", s), 1.0) == pytest.approx(1 / math.sqrt(2 * math.pi * s), rel=1e-15)

    @pytest.mark.parametrize("dist", [LimitingDistribution("log-normal", 0.05),
                                      LimitingDistribution("log-normal", 1.2),
                                      LimitingDistribution("K", 2.48),
                                      LimitingDistribution("K", 0.7),
                                      LimitingDistribution("exponential", 1.0),
                                      LimitingDistribution("exponential", 3.5)])
    def test_normalized(self, dist):
        assert density_integral(lambda I: limiting_pdf(dist, I)) == pytest.approx(1.0, abs=1e-6)

    def test_validation(self):
        with pytest.raises(DomainError):
            LimitingDistribution("exponential", 0.0)
        with pytest.raises(DomainError):
            LimitingDistribution("rayleigh", 1.0)


class TestSampler:
    def test_deterministic(self):
        a = sample_scintillation(2.95, 2.97, 5000, seed=12345)
        b = sample_scintillation(2.95, 2.97, 5000, seed=12345)
        assert a.samples.tobytes() == b.samples.tobytes()
        assert a.seed == 12345 and a.alpha == 2.95 and a.beta == 2.97

    def test_seed_changes_stream(self):
        a = sample_scintillation(2.95, 2.97, 100, seed=1)
        b = sample_scintillation(2.95, 2.97, 100, seed=2)
        assert not np.array_equal(a.samples, b.samples)

    def test_worker_count_invariant(self):
        a = sample_scintillation(4.0, 1.5, 300_000, seed=7, workers=1)
        b = sample_scintillation(4.0, 1.5, 300_000, seed=7, workers=4)
        assert a.samples.tobytes() == b.samples.tobytes()

    def test_full_64bit_seed(self):
        s = sample_scintillation(2.0, 2.0, 10, seed=2**64 - 1)
        assert np.all(s.samples > 0)
        with pytest.raises(DomainError):
            sample_scintillation(2.0, 2.0, 10, seed=2**64)
        with pytest.raises(DomainError):
            sample_scintillation(2.0, 2.0, 10, seed=-1)

    def test_moments(self):
        s = sample_scintillation(2.95, 2.97, 1_000_000, seed=2024).samples
        se_mean = s.std(ddof=1) / math.sqrt(s.size)
        assert abs(s.mean() - 1.0) < 3 * se_mean
        assert abs(s.var(ddof=1) - scintillation_index(2.95, 2.97)) < 3 * variance_standard_error(s)

    def test_law_matches_density(self):
        alpha, beta = 4.0, 1.5
        nodes, cdf = gg_cdf_table(alpha, beta)
        assert cdf[-1] == pytest.approx(1.0, abs=1e-8)
        s = sample_scintillation(alpha, beta, 200_000, seed=5).samples
        res = stats.kstest(s, lambda x: np.interp(x, nodes, cdf, right=1.0))
        assert res.pvalue > 0.01

    @pytest.mark.parametrize("args", [(0.0, 1.0, 10), (1.0, math.inf, 10), (1.0, 1.0, 0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            sample_scintillation(*args, seed=0)


class TestScintillationIndex:
    def test_values(self):
        assert scintillation_index(1.0, 1.0) == 3.0
        assert scintillation_index(2.95, 2.97) == pytest.approx(1 / 2.95 + 1 / 2.97 + 1 / (2.95 * 2.97), rel=1e-15)
        assert scintillation_index(2.95, 2.97) == pytest.approx(0.790, abs=5e-4)
        assert scintillation_index(1e12, 1e12) < 1e-11

    @given(st.floats(0.1, 1e3), st.floats(0.1, 1e3))
    def test_product_second_moment(self, a, b):
        # <I^2> = <I_a^2><I_b^2> for unit-mean Gamma factors
        assert 1 + scintillation_index(a, b) == pytest.approx((1 + 1 / a) * (1 + 1 / b), rel=1e-13)


class TestAttenuation:
    def test_vanishes_without_turbulence(self):
        assert turbulence_attenuation(0.0) == 0.0
        assert turbulence_attenuation(1e-9) < 1e-3

    def test_quarter_index(self):
        s2 = optimize.brentq(lambda s: scintillation_index(*_ab(s)) - 0.25, 1e-3, 1.0, xtol=1e-15)
        assert turbulence_attenuation(s2) == pytest.approx(-10 * math.log10(0.5), rel=1e-9)
        assert turbulence_attenuation(s2) == pytest.approx(3.0103, abs=1e-4)

    def test_rises_then_falls(self):
        s2 = np.geomspace(1e-3, 1e3, 400)
        s2 = s2[[scintillation_index(*_ab(s)) < 0.9 for s in s2]]
        att = np.array([turbulence_attenuation(s) for s in s2])
        peak = np.argmax(att)
        assert 0 < peak < len(att) - 1
        assert att[0] < att[peak] and att[-1] < att[peak]

    @settings(max_examples=300)
    @given(st.floats(0.01, 100.0), st.floats(0.0, 1.0))
    def test_expanded_matches_composed(self, s2, D):
        try:
            composed = turbulence_attenuation(s2, D)
        except SingularityError:
            with pytest.raises(SingularityError):
                turbulence_attenuation_expanded(s2, D)
            return
        assert turbulence_attenuation_expanded(s2, D) == pytest.approx(composed, rel=1e-12)

    def test_pole_raises(self):
        s2 = optimize.brentq(lambda s: scintillation_index(*_ab(s)) - 1.0, 0.1, 3.0, xtol=1e-300, rtol=8.9e-16)
        with pytest.raises(SingularityError) as info:
            turbulence_attenuation(s2)
        assert info.value.context["sigma_R2"] == s2
        assert str(s2) in str(info.value)


def _ab(s2):
    p = large_small_scale_params(s2, 0.0)
    return p.alpha, p.beta
