"""Separation constructions: Lp escape, bounded-risk unbounded stacks, L1 blowup."""

import math

import mpmath
import numpy as np
import pytest
from scipy import special

from riskspace.extremal import (
    heavy_tail_quantile,
    l1_divergence_demo,
    linf_escape,
    linf_risk_bound,
    lp_escape,
    lp_escape_limit,
    step_density_approx,
)
from riskspace.risk import sigma_norm, spectral_risk
from riskspace.spectrum import AvarSpectrum, PowerSqrtSpectrum, StepSpectrum
from riskspace.stepdist import StepQuantile

FLAT = StepSpectrum([0.0, 1.0], [1.0])
SQRT2 = math.sqrt(2.0)


class TestLpEscape:
    def test_single_band_sums_coincide(self):
        esc = lp_escape(PowerSqrtSpectrum(), 1.5, 1)
        expected = SQRT2 / float(special.zeta(4.0))
        assert esc.predicted_risk == pytest.approx(expected, rel=1e-12)
        assert esc.lp_partial == pytest.approx(expected, rel=1e-12)

    def test_limit_against_mpmath(self):
        with mpmath.workdps(30):
            oracle = float(mpmath.sqrt(2) * mpmath.zeta(3) / mpmath.zeta(4))
        assert lp_escape_limit(PowerSqrtSpectrum(), 1.5) == pytest.approx(oracle, rel=1e-13)

    def test_risks_climb_toward_the_limit(self):
        sigma = PowerSqrtSpectrum()
        limit = lp_escape_limit(sigma, 1.5)
        last_pred, last_risk = 0.0, 0.0
        for depth in (1, 10, 100):
            esc = lp_escape(sigma, 1.5, depth)
            risk = spectral_risk(sigma, esc.dist)
            assert esc.predicted_risk >= last_pred
            assert risk >= last_risk
            # the submesh samples the density at each subcell's shallow
            # edge, so the built risk sits below the aligned series
            assert risk <= esc.predicted_risk + 1e-12
            assert esc.predicted_risk <= limit + 1e-12
            last_pred, last_risk = esc.predicted_risk, risk

    def test_partial_power_passes_any_threshold(self):
        # harmonic growth: threshold 5 K / zeta(4) falls by N = 100
        esc = lp_escape(PowerSqrtSpectrum(), 1.5, 100)
        assert esc.lp_partial > 5.0 * SQRT2 / float(special.zeta(4.0))

    def test_partial_power_is_the_harmonic_sum(self):
        esc = lp_escape(PowerSqrtSpectrum(), 1.5, 50)
        harmonic = sum(1.0 / n for n in range(1, 51))
        assert esc.lp_partial == pytest.approx(SQRT2 / float(special.zeta(4.0)) * harmonic, rel=1e-12)

    def test_step_spectra_build_the_series_exactly(self):
        for depth in (1, 7, 40):
            esc = lp_escape(FLAT, 2.0, depth)
            assert spectral_risk(FLAT, esc.dist) == pytest.approx(
                esc.predicted_risk, abs=1e-12
            )

    def test_doubling_depth_grows_the_partial_by_a_fixed_floor(self):
        sigma = AvarSpectrum(0.3)
        q = 1.5
        p = q / (q - 1.0)
        total = float(sigma.tail_power_integral(1.0, q))
        floor = total / (2.0 * float(special.zeta(p + 1.0)))
        for depth in (1, 4, 16):
            small = lp_escape(sigma, q, depth)
            large = lp_escape(sigma, q, 2 * depth)
            assert large.lp_partial - small.lp_partial >= floor - 1e-12

    def test_band_cuts_meet_their_tail_targets(self):
        sigma = PowerSqrtSpectrum()
        q = 1.5
        p = q / (q - 1.0)
        total = float(sigma.tail_power_integral(1.0, q))
        zp1 = float(special.zeta(p + 1.0))
        for n in range(1, 12):
            target = total * float(special.zeta(p + 1.0, n + 1.0)) / zp1
            g = sigma.invert_tail_power(target, q)
            assert abs(float(sigma.tail_power_integral(g, q)) - target) <= 1e-10

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            lp_escape(FLAT, 1.0, 5)
        with pytest.raises(ValueError):
            lp_escape(FLAT, math.inf, 5)
        with pytest.raises(ValueError):
            lp_escape(FLAT, 2.0, 0)

    def test_nonintegrable_power_rejected(self):
        # sigma**2 has no finite integral for the square-root spectrum
        with pytest.raises(ValueError):
            lp_escape(PowerSqrtSpectrum(), 2.0, 5)


class TestLinfEscape:
    def test_single_band_hand_values(self):
        esc = linf_escape(PowerSqrtSpectrum(), 1)
        np.testing.assert_allclose(esc.dist.values, [0.0, 1.0])
        np.testing.assert_allclose(esc.dist.masses, [0.25, 0.75])
        assert esc.risk == pytest.approx(math.sqrt(3.0) / 2.0, abs=1e-15)

    def test_risk_stays_bounded_while_esssup_grows(self):
        sigma = PowerSqrtSpectrum()
        for depth in (1, 5, 12, 30):
            esc = linf_escape(sigma, depth)
            assert esc.dist.max_value == float(depth)
            assert esc.risk <= linf_risk_bound(depth) + 1e-12
            assert esc.risk <= 4.0

    def test_bound_function(self):
        assert linf_risk_bound(1) == 1.0
        assert linf_risk_bound(2) == 2.0
        assert linf_risk_bound(200) <= 4.0

    def test_depth_domain(self):
        with pytest.raises(ValueError):
            linf_escape(FLAT, 0)


class TestHeavyTail:
    def test_dyadic_layout(self):
        dist = heavy_tail_quantile(4)
        np.testing.assert_allclose(dist.values, [1.0, 2.0, 4.0, 8.0, 16.0])
        np.testing.assert_allclose(dist.masses, [0.5, 0.25, 0.125, 0.0625, 0.0625])

    def test_mean_grows_linearly(self):
        for depth in (1, 8, 24):
            assert heavy_tail_quantile(depth).mean == pytest.approx(
                depth / 2.0 + 1.0, abs=1e-12
            )

    def test_depth_domain(self):
        with pytest.raises(ValueError):
            heavy_tail_quantile(0)
        with pytest.raises(ValueError):
            heavy_tail_quantile(1001)


class TestDivergenceDemo:
    def test_reaches_target_ten(self):
        report = l1_divergence_demo(heavy_tail_quantile(24), FLAT, 10.0)
        assert report.exceeded_at == 2.0**19
        assert not report.vacuous
        assert len(report.rows) == 20
        assert report.rows[-1].l1 == pytest.approx(10.5, abs=1e-12)

    def test_truncated_means_follow_the_half_log_law(self):
        report = l1_divergence_demo(heavy_tail_quantile(24), FLAT, 10.0)
        for j, row in enumerate(report.rows):
            assert row.level == 2.0**j
            assert row.l1 == pytest.approx(j / 2.0 + 1.0, abs=1e-12)
            # flat spectrum: the sigma norm IS the L1 norm
            assert row.sigma == pytest.approx(row.l1, abs=1e-12)

    def test_rows_satisfy_chebyshev_under_any_spectrum(self):
        report = l1_divergence_demo(heavy_tail_quantile(16), PowerSqrtSpectrum(), 6.0)
        assert report.exceeded_at is not None
        for row in report.rows:
            assert row.sigma >= row.l1 - 1e-12

    def test_bounded_inputs_go_vacuous(self):
        report = l1_divergence_demo(
            StepQuantile.from_samples([1.0, 2.0]), FLAT, 100.0
        )
        assert report.vacuous
        assert report.exceeded_at is None
        assert report.rows[-1].l1 == pytest.approx(1.5, abs=1e-15)

    def test_explicit_level_schedules(self):
        # clipping at 4 gives l1 exactly 2, which does not strictly exceed
        # the target; the scan moves on and stops at 16
        report = l1_divergence_demo(
            heavy_tail_quantile(8), FLAT, 2.0, levels=[4.0, 16.0]
        )
        assert report.rows[0].l1 == 2.0
        assert report.exceeded_at == 16.0
        with pytest.raises(ValueError):
            l1_divergence_demo(heavy_tail_quantile(8), FLAT, 2.0, levels=[4.0, 4.0])
        with pytest.raises(ValueError):
            l1_divergence_demo(heavy_tail_quantile(8), FLAT, 2.0, levels=[-1.0, 4.0])

    def test_target_domain(self):
        with pytest.raises(ValueError):
            l1_divergence_demo(heavy_tail_quantile(8), FLAT, 0.0)


class TestStepApprox:
    def test_step_input_is_its_own_approximation(self):
        dist = StepQuantile.from_samples([1.0, 2.0, 3.0, 4.0])
        for eps in (0.1, 0.01):
            approx, err = step_density_approx(AvarSpectrum(0.5), dist, eps)
            assert err < eps
            np.testing.assert_array_equal(approx.values, dist.values)
            np.testing.assert_array_equal(approx.masses, dist.masses)

    def test_residual_is_recomputed_not_assumed(self):
        dist = StepQuantile.from_samples([-3.0, 7.0])
        _, err = step_density_approx(PowerSqrtSpectrum(), dist, 0.5)
        assert err == 0.0

    def test_tolerance_domain(self):
        with pytest.raises(ValueError):
            step_density_approx(FLAT, StepQuantile.from_samples([1.0]), 0.0)
