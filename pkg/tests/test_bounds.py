"""Closed-form bound evaluators against quadrature oracles and each other."""

import math

import numpy as np
import pytest

from ea1p1.bounds import (
    BoundKind,
    fit_decay_base,
    ir_cht_1d,
    ir_cht_ep_bounds,
    ir_sph_1d,
    ir_sph_ep_bounds,
    ir_sph_rus,
    optimal_sigma_cht_1d,
    p_cht_1d,
    p_cht_ep_bounds,
    p_sph_1d,
    p_sph_ep_bounds,
    p_sph_rus,
    rus_cht_coordinate_feasible,
)
from ea1p1.errors import DomainError, FitRangeError, InconsistentStateError
from ea1p1.numerics import SQRT_2PI, QuadratureSpec, gaussian_cdf, integrate, maximize_1d

QUAD = QuadratureSpec(abs_tol=1e-11)


def window_probability_oracle(center: float, radius: float, sigma: float) -> float:
    """Quadrature of the Gaussian mass of [center-radius... ] shifted window:
    P(|y| <= radius) for y ~ N(center, sigma^2)."""
    f = lambda y: math.exp(-((y - center) ** 2) / (2 * sigma * sigma)) / (SQRT_2PI * sigma)
    return integrate(f, -radius, radius, QUAD)


def gain_rate_oracle(c: float, center: float, sigma: float) -> float:
    """Quadrature of the relative-gain integral over the target window."""
    rc = math.sqrt(c)
    f = lambda y: (c - y * y) * math.exp(-((y - center) ** 2) / (2 * sigma * sigma)) / (
        SQRT_2PI * sigma
    )
    return integrate(f, -rc, rc, QUAD) / c


class TestSphereProbability1d:
    def test_small_sigma_limit_is_half(self):
        assert p_sph_1d(1.0, 1e-12).value == pytest.approx(0.5, abs=1e-15)

    def test_supremum_never_reached(self):
        # strict inequality within the float64-representable range of Phi;
        # below sigma ~ 0.25 at C=1 the CDF saturates to 1.0 exactly
        for sigma in (0.3, 1.0, 3.0, 10.0):
            assert 0.0 < p_sph_1d(1.0, sigma).value < 0.5

    def test_reference_values(self):
        assert p_sph_1d(1.0, 1.0).value == pytest.approx(0.4772498680518208, abs=1e-14)
        assert p_sph_1d(1.0, 2.0).value == pytest.approx(0.3413447460685429, abs=1e-14)

    def test_matches_quadrature(self):
        for c, sigma in ((1.0, 0.5), (1.0, 1.0), (4.0, 1.3), (0.25, 2.0)):
            oracle = window_probability_oracle(math.sqrt(c), math.sqrt(c), sigma)
            assert p_sph_1d(c, sigma).value == pytest.approx(oracle, abs=1e-9)

    def test_increases_as_sigma_decreases(self):
        # sigma >= 0.3 keeps Phi below its float64 saturation point
        sigmas = np.linspace(0.3, 4.0, 80)
        vals = [p_sph_1d(1.0, s).value for s in sigmas]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            p_sph_1d(0.0, 1.0)
        with pytest.raises(DomainError):
            p_sph_1d(1.0, -1.0)


class TestSphereProbabilityRus:
    def test_n1_reduces_to_single_coordinate(self):
        exact, interval = p_sph_rus([1.0], 0.7)
        single = p_sph_1d(1.0, 0.7).value
        assert exact.value == pytest.approx(single, abs=1e-15)
        assert interval.lower == pytest.approx(single, abs=1e-15)
        assert interval.upper == pytest.approx(single, abs=1e-15)

    def test_equal_coordinates_attains_upper(self):
        xs = np.full(4, 0.5)  # shell C=1
        exact, interval = p_sph_rus(xs, 0.5, c=1.0)
        assert exact.value == pytest.approx(0.4772498680518208, abs=1e-12)
        assert interval.lower == pytest.approx(0.4772498680518208 / 4, abs=1e-12)
        assert exact.value == pytest.approx(interval.upper, abs=1e-12)

    def test_single_axis_value(self):
        exact, _ = p_sph_rus([1.0, 0.0, 0.0, 0.0], 0.5)
        expected = (gaussian_cdf(4.0) - 0.5) / 4.0
        assert exact.value == pytest.approx(expected, abs=1e-15)
        assert exact.value == pytest.approx(0.124992, abs=1e-6)

    def test_negative_coordinates_mirrored(self):
        a, _ = p_sph_rus([0.6, -0.8], 0.9)
        b, _ = p_sph_rus([0.6, 0.8], 0.9)
        assert a.value == b.value

    def test_exact_inside_interval_random_shells(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            n = int(rng.integers(2, 9))
            x = rng.normal(size=n)
            x *= math.sqrt(1.0 / float(x @ x))
            sigma = float(rng.uniform(0.1, 3.0))
            exact, interval = p_sph_rus(x, sigma)
            assert interval.lower - 1e-12 <= exact.value <= interval.upper + 1e-12

    def test_shell_mismatch_rejected(self):
        with pytest.raises(InconsistentStateError):
            p_sph_rus([1.0, 0.0], 0.5, c=2.0)


class TestSphereProbabilityEp:
    def test_n1_upper_equals_single_coordinate(self):
        bv = p_sph_ep_bounds(1.0, 0.8, 1)
        assert bv.upper == pytest.approx(p_sph_1d(1.0, 0.8).value, abs=1e-15)
        assert bv.lower == pytest.approx(bv.upper, abs=1e-15)

    def test_n2_reference_values(self):
        bv = p_sph_ep_bounds(1.0, 1.0, 2)
        assert bv.upper == pytest.approx(0.32581347004278877, abs=1e-12)
        assert bv.lower == pytest.approx(0.17753615660951952, abs=1e-12)

    def test_sandwich_on_grid(self):
        rng = np.random.default_rng(22)
        for _ in range(200):
            c = float(rng.uniform(0.2, 10.0))
            sigma = float(rng.uniform(0.05, 5.0))
            n = int(rng.integers(1, 12))
            bv = p_sph_ep_bounds(c, sigma, n)
            assert 0.0 <= bv.lower <= bv.upper <= 0.5

    def test_monotone_decay_in_dimension(self):
        for sigma in (0.3, 1.0, 2.5):
            uppers = [p_sph_ep_bounds(1.0, sigma, n).upper for n in range(1, 12)]
            lowers = [p_sph_ep_bounds(1.0, sigma, n).lower for n in range(1, 12)]
            assert all(a > b for a, b in zip(uppers, uppers[1:]))
            assert all(a > b for a, b in zip(lowers, lowers[1:]))

    def test_both_ends_increase_as_sigma_decreases(self):
        sigmas = np.linspace(0.1, 3.0, 40)
        for n in (2, 5):
            ups = [p_sph_ep_bounds(1.0, s, n).upper for s in sigmas]
            los = [p_sph_ep_bounds(1.0, s, n).lower for s in sigmas]
            assert all(a > b for a, b in zip(ups, ups[1:]))
            assert all(a > b for a, b in zip(los, los[1:]))


class TestSphereRate1d:
    def test_peak_region(self):
        assert ir_sph_1d(1.0, 0.88).value == pytest.approx(0.323860516004503, abs=1e-12)

    def test_vanishes_at_small_sigma(self):
        assert ir_sph_1d(1.0, 1e-8).value < 1e-7

    def test_reference_value_at_ratio_two(self):
        assert ir_sph_1d(1.0, 2.0).value == pytest.approx(0.2303901373315591, abs=1e-12)

    def test_matches_quadrature(self):
        for c, sigma in ((1.0, 0.88), (1.0, 2.0), (4.0, 1.0), (0.5, 0.3)):
            oracle = gain_rate_oracle(c, math.sqrt(c), sigma)
            assert ir_sph_1d(c, sigma).value == pytest.approx(oracle, abs=1e-9)

    def test_scale_free_in_ratio(self):
        for lam in (0.1, 3.0, 25.0):
            a = ir_sph_1d(1.0, 0.7).value
            b = ir_sph_1d(lam, 0.7 * math.sqrt(lam)).value
            assert a == pytest.approx(b, rel=1e-12)

    def test_nonnegative(self):
        for sigma in np.linspace(0.01, 20.0, 100):
            assert ir_sph_1d(1.0, float(sigma)).value >= 0.0


class TestSphereRateRus:
    def test_n1_reduces(self):
        assert ir_sph_rus([1.0], 0.9).value == pytest.approx(
            ir_sph_1d(1.0, 0.9).value, abs=1e-15
        )

    def test_equal_coordinates_scaling(self):
        # With per-coordinate scale at the rate peak, n times the rate stays
        # at the single-coordinate maximum.
        for n in (2, 4, 8):
            xs = np.full(n, math.sqrt(1.0 / n))
            sigma = 0.88 * math.sqrt(1.0 / n)
            got = ir_sph_rus(xs, sigma, c=1.0).value
            expected = ir_sph_1d(1.0 / n, sigma).value / n
            assert got == pytest.approx(expected, rel=1e-12)
            assert n * got == pytest.approx(0.323860516004503, abs=1e-9)

    def test_zero_coordinates_contribute_nothing(self):
        full = ir_sph_rus([1.0, 0.0, 0.0], 0.5).value
        alone = ir_sph_1d(1.0, 0.5).value
        assert full == pytest.approx(alone / 3.0, rel=1e-12)


class TestSphereRateEp:
    def test_n1_lower_is_exact_rate(self):
        bv = ir_sph_ep_bounds(1.0, 0.88, 1)
        assert bv.lower == pytest.approx(ir_sph_1d(1.0, 0.88).value, abs=1e-14)

    def test_inner_factor_peaks_at_scaled_ratio(self):
        # The non-geometric factor of the lower bound is the 1-D rate at
        # effective scale sigma*sqrt(n); it peaks near sigma*sqrt(n)/sqrt(C)
        # = 0.88 with value ~0.3239.
        n = 4
        res = maximize_1d(
            lambda s: ir_sph_1d(1.0, s * math.sqrt(n)).value, (0.01, 3.0), tol=1e-9
        )
        assert res.arg * math.sqrt(n) == pytest.approx(0.8768509, abs=1e-3)
        assert res.value == pytest.approx(0.3238629431295064, abs=1e-7)

    def test_upper_below_half(self):
        # the bound never exceeds 1/2; float saturation of Phi can attain it
        rng = np.random.default_rng(23)
        for _ in range(100):
            c = float(rng.uniform(0.2, 5.0))
            sigma = float(rng.uniform(0.05, 5.0))
            bv = ir_sph_ep_bounds(c, sigma, int(rng.integers(1, 10)))
            assert bv.upper <= 0.5
            if 2.0 * math.sqrt(c) / sigma < 8.0:
                assert bv.upper < 0.5

    def test_sandwich_and_raw_lower_nonnegative(self):
        rng = np.random.default_rng(24)
        for _ in range(200):
            bv = ir_sph_ep_bounds(
                float(rng.uniform(0.2, 5.0)),
                float(rng.uniform(0.05, 8.0)),
                int(rng.integers(1, 12)),
            )
            assert 0.0 <= bv.lower <= bv.upper
            assert bv.raw_lower >= 0.0


class TestCheatingProbability1d:
    def test_reference_value(self):
        assert p_cht_1d(10.0, 4.0, 3.946).value == pytest.approx(0.2349106793782091, abs=1e-12)

    def test_vanishes_in_both_sigma_limits(self):
        assert p_cht_1d(10.0, 4.0, 1e-6).value < 1e-12
        assert p_cht_1d(10.0, 4.0, 1e6).value < 1e-5

    def test_capped_branch_uses_absorbing_radius(self):
        # For M <= C <= M+1 the window radius is sqrt(M).
        m, c, sigma = 10.0, 10.5, 2.0
        x = math.sqrt(2 * m + 1 - c)
        r = math.sqrt(m)
        expected = gaussian_cdf((x + r) / sigma) - gaussian_cdf((x - r) / sigma)
        assert p_cht_1d(m, c, sigma).value == pytest.approx(expected, abs=1e-15)

    def test_matches_quadrature_both_branches(self):
        for m, c, sigma in ((10.0, 4.0, 3.946), (10.0, 10.5, 2.0), (5.0, 1.0, 1.5)):
            x = math.sqrt(2 * m + 1 - c)
            r = math.sqrt(min(c, m))
            oracle = window_probability_oracle(x, r, sigma)
            assert p_cht_1d(m, c, sigma).value == pytest.approx(oracle, abs=1e-9)

    def test_level_above_range_rejected(self):
        with pytest.raises(DomainError):
            p_cht_1d(10.0, 11.5, 1.0)


class TestOptimalSigma:
    def test_synthetic_window(self):
        # Window [1, 2]: M, C with x-r=1, x+r=2 means x=1.5, r=0.5; the
        # closed form reduces to sqrt(3 / (2 ln 2)).
        expected = math.sqrt(3.0 / (2.0 * math.log(2.0)))
        # x = 1.5, r = 0.5: so C = r^2 = 0.25 and 2M+1-C = x^2 = 2.25.
        c = 0.25
        m = (2.25 - 1.0 + c) / 2.0
        got = optimal_sigma_cht_1d(m, c)
        assert got == pytest.approx(expected, rel=1e-12)
        assert 1.0 < got < 2.0

    def test_reference_value(self):
        assert optimal_sigma_cht_1d(10.0, 4.0) == pytest.approx(3.9459846812610846, abs=1e-12)

    def test_matches_numeric_argmax(self):
        star = optimal_sigma_cht_1d(10.0, 4.0)
        res = maximize_1d(lambda s: p_cht_1d(10.0, 4.0, s).value, (1.0, 10.0), tol=1e-8)
        assert abs(res.arg - star) <= 1e-3

    def test_is_stationary_point(self):
        m, c = 10.0, 4.0
        star = optimal_sigma_cht_1d(m, c)
        h = 1e-4
        f = lambda s: p_cht_1d(m, c, s).value
        assert f(star - h) < f(star) and f(star + h) < f(star)
        d_left = (f(star) - f(star - h)) / h
        d_right = (f(star + h) - f(star)) / h
        assert d_left > 0.0 > d_right

    def test_always_inside_window(self):
        rng = np.random.default_rng(25)
        for _ in range(50):
            m = float(rng.uniform(1.0, 60.0))
            c = float(rng.uniform(0.05, 0.97) * m)
            star = optimal_sigma_cht_1d(m, c)
            x = math.sqrt(2 * m + 1 - c)
            r = math.sqrt(c)
            assert x - r < star < x + r


class TestRusCoordinateFeasibility:
    def test_equal_coordinates_deep_shell_infeasible(self):
        assert rus_cht_coordinate_feasible(10.0, 2.0, 4.75) is False

    def test_concentrated_coordinate_feasible(self):
        assert rus_cht_coordinate_feasible(10.0, 2.0, 19.0) is True

    def test_threshold_matches_reachability(self):
        # Feasibility must agree with the geometric statement: some y_i has
        # ||y||^2 <= C after changing coordinate i alone.
        m, c = 10.0, 2.0
        for xi2 in (4.75, 16.9, 17.1, 19.0):
            shell = 2 * m + 1 - c
            reachable = shell - xi2 <= c  # best case y_i = 0
            assert rus_cht_coordinate_feasible(m, c, xi2) is reachable

    def test_capped_branch_cutoff(self):
        # For M <= C <= M+1 the target radius caps at sqrt(M); feasibility
        # needs x_i^2 above (2M+1-C) - M = M+1-C.
        m, c = 10.0, 10.5
        cutoff = 2 * m + 1 - c - min(c, m)
        assert cutoff == pytest.approx(0.5)
        assert rus_cht_coordinate_feasible(m, c, 0.4) is False
        assert rus_cht_coordinate_feasible(m, c, 0.6) is True


class TestCheatingProbabilityEp:
    def test_n1_both_ends_equal_single_coordinate(self):
        bv = p_cht_ep_bounds(10.0, 4.0, 3.0, 1)
        single = p_cht_1d(10.0, 4.0, 3.0).value
        assert bv.lower == pytest.approx(single, abs=1e-15)
        assert bv.upper == pytest.approx(single, abs=1e-15)

    def test_sandwich_on_grid(self):
        rng = np.random.default_rng(26)
        for _ in range(100):
            m = float(rng.uniform(2.0, 40.0))
            c = float(rng.uniform(0.1, 0.9) * m)
            sigma = float(rng.uniform(0.2, 3.0) * math.sqrt(m))
            n = int(rng.integers(1, 9))
            bv = p_cht_ep_bounds(m, c, sigma, n)
            assert 0.0 <= bv.lower <= bv.upper <= 1.0

    def test_monotone_decay_in_dimension(self):
        for sigma in (1.0, 3.0, 6.0):
            ups = [p_cht_ep_bounds(10.0, 4.0, sigma, n).upper for n in range(1, 10)]
            los = [p_cht_ep_bounds(10.0, 4.0, sigma, n).lower for n in range(1, 10)]
            assert all(a > b for a, b in zip(ups, ups[1:]))
            assert all(a > b for a, b in zip(los, los[1:]))

    def test_branch_restriction(self):
        with pytest.raises(DomainError):
            p_cht_ep_bounds(10.0, 10.0, 1.0, 2)


class TestCheatingRate1d:
    def test_matches_quadrature_on_grid(self):
        # Primary correctness check: 50 parameter combinations against the
        # defining integral.
        rng = np.random.default_rng(27)
        for _ in range(50):
            m = float(rng.uniform(2.0, 40.0))
            c = float(rng.uniform(0.1, 0.9) * m)
            sigma = float(rng.uniform(0.2, 2.5) * math.sqrt(m))
            x = math.sqrt(2 * m + 1 - c)
            oracle = gain_rate_oracle(c, x, sigma)
            assert ir_cht_1d(m, c, sigma).value == pytest.approx(oracle, abs=1e-6)

    def test_vanishes_at_small_sigma(self):
        assert ir_cht_1d(10.0, 4.0, 1e-6).value < 1e-12

    def test_reference_against_quadrature(self):
        oracle = gain_rate_oracle(4.0, math.sqrt(17.0), 4.0)
        assert ir_cht_1d(10.0, 4.0, 4.0).value == pytest.approx(oracle, abs=1e-9)
        assert ir_cht_1d(10.0, 4.0, 4.0).value == pytest.approx(0.15651931975370148, abs=1e-12)

    def test_nonnegative(self):
        for sigma in np.linspace(0.05, 12.0, 60):
            assert ir_cht_1d(10.0, 4.0, float(sigma)).value >= 0.0

    def test_rate_below_probability(self):
        for sigma in (1.0, 2.0, 4.0, 8.0):
            assert ir_cht_1d(10.0, 4.0, sigma).value <= p_cht_1d(10.0, 4.0, sigma).value


class TestCheatingRateEp:
    def test_n1_interval_brackets_exact_rate(self):
        bv = ir_cht_ep_bounds(10.0, 4.0, 3.0, 1)
        exact = ir_cht_1d(10.0, 4.0, 3.0).value
        assert bv.lower == pytest.approx(exact, abs=1e-14)
        assert bv.lower - 1e-14 <= exact <= bv.upper + 1e-14

    def test_sandwich_with_clamp_on_grid(self):
        rng = np.random.default_rng(28)
        for _ in range(200):
            m = float(rng.uniform(2.0, 40.0))
            c = float(rng.uniform(0.1, 0.9) * m)
            sigma = float(rng.uniform(0.1, 3.0) * math.sqrt(m))
            n = int(rng.integers(1, 9))
            bv = ir_cht_ep_bounds(m, c, sigma, n)
            assert 0.0 <= bv.lower <= bv.upper
            assert bv.raw_lower >= 0.0  # inscribed-box assembly never dips below 0

    def test_lower_below_probability_lower(self):
        # Relative gain <= 1 inside the target, so the rate's inscribed-box
        # bound sits below the probability's inscribed-box bound.
        for n in (1, 2, 4):
            rate = ir_cht_ep_bounds(10.0, 4.0, 3.0, n)
            prob = p_cht_ep_bounds(10.0, 4.0, 3.0, n)
            assert rate.lower <= prob.lower + 1e-14


class TestDecayBaseFit:
    def test_geometric_sequence_recovers_base(self):
        vals = {n: p_sph_ep_bounds(1.0, 1.0, n).upper for n in range(2, 9)}
        fit = fit_decay_base(vals, offset="n-1")
        expected = gaussian_cdf(1.0) - gaussian_cdf(-1.0)
        assert fit.base_a == pytest.approx(expected, abs=1e-12)
        assert fit.r2 > 0.9999
        assert fit.dims == tuple(range(2, 9))

    def test_offset_choice_does_not_change_base(self):
        vals = {n: 0.5 * 0.7**n for n in (2, 3, 4, 5, 6)}
        a = fit_decay_base(vals, offset="n").base_a
        b = fit_decay_base(vals, offset="n-1").base_a
        assert a == pytest.approx(b, rel=1e-12)
        assert a == pytest.approx(0.7, rel=1e-10)

    def test_constant_sequence_rejected_with_report(self):
        with pytest.raises(FitRangeError) as err:
            fit_decay_base({n: 0.25 for n in (2, 3, 4, 5)})
        assert err.value.fitted == pytest.approx(1.0, abs=1e-12)
        assert "1" in str(err.value)

    def test_cheating_lower_bound_fit_in_range(self):
        vals = {n: p_cht_ep_bounds(10.0, 4.0, 3.0, n).lower for n in range(2, 9)}
        fit = fit_decay_base(vals, offset="n")
        assert 0.0 < fit.base_a < 1.0

    def test_too_few_dimensions_rejected(self):
        with pytest.raises(DomainError):
            fit_decay_base({2: 0.5, 3: 0.4, 4: 0.3})

    def test_nonpositive_values_rejected(self):
        with pytest.raises(DomainError):
            fit_decay_base({2: 0.5, 3: 0.4, 4: 0.0, 5: 0.2})


class TestCrossFamilyInvariants:
    def test_sandwich_validity_random_grid(self):
        rng = np.random.default_rng(1000)
        for _ in range(1000):
            c = float(rng.uniform(0.1, 8.0))
            sigma = float(rng.uniform(0.05, 6.0))
            n = int(rng.integers(1, 12))
            bv = p_sph_ep_bounds(c, sigma, n)
            assert bv.lower <= bv.upper + 1e-15
            bv = ir_sph_ep_bounds(c, sigma, n)
            assert bv.lower <= bv.upper + 1e-15
            m = c + float(rng.uniform(0.5, 20.0))
            bv = p_cht_ep_bounds(m, c, sigma, n)
            assert bv.lower <= bv.upper + 1e-15
            bv = ir_cht_ep_bounds(m, c, sigma, n)
            assert bv.lower <= bv.upper + 1e-15

    def test_n1_exactness_all_families(self):
        c, sigma, m = 1.7, 0.9, 12.0
        assert p_sph_ep_bounds(c, sigma, 1).upper == pytest.approx(
            p_sph_1d(c, sigma).value, abs=1e-12
        )
        assert p_sph_ep_bounds(c, sigma, 1).lower == pytest.approx(
            p_sph_1d(c, sigma).value, abs=1e-12
        )
        assert ir_sph_ep_bounds(c, sigma, 1).lower == pytest.approx(
            ir_sph_1d(c, sigma).value, abs=1e-12
        )
        assert p_cht_ep_bounds(m, c, sigma, 1).upper == pytest.approx(
            p_cht_1d(m, c, sigma).value, abs=1e-12
        )
        assert ir_cht_ep_bounds(m, c, sigma, 1).lower == pytest.approx(
            ir_cht_1d(m, c, sigma).value, abs=1e-12
        )

    def test_exploration_probability_has_interior_maximizer(self):
        rng = np.random.default_rng(1001)
        for _ in range(10):
            m = float(rng.uniform(2.0, 30.0))
            c = float(rng.uniform(0.15, 0.9) * m)
            star = optimal_sigma_cht_1d(m, c)
            x = math.sqrt(2 * m + 1 - c)
            res = maximize_1d(
                lambda s: p_cht_1d(m, c, s).value,
                (0.05 * star, 2.0 * (x + math.sqrt(c))),
                tol=1e-7,
            )
            assert abs(res.arg - star) <= 1e-3
