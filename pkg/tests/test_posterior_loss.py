import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy.integrate import quad

from aggloss.core_bounds import DegenerateIntervalError, DomainError, Marginals, feasible_interval
from aggloss.posterior_loss import (
    coefficient_arrays,
    coefficients_AB,
    expected_kl,
    expected_kl_arrays,
    kappa,
    kl_bernoulli,
    loss_coefficients,
    normalization_Z,
    optimal_estimate,
    optimal_estimate_arrays,
    optimal_expected_kl,
    optimal_expected_kl_arrays,
)

unit_open = st.floats(min_value=1e-6, max_value=1 - 1e-6)


def kappa_oracle(a, b):
    """kappa by mpmath tanh-sinh quadrature in the angle variable."""
    lo, hi = max(a + b - 1.0, 0.0), min(a, b)
    with mpmath.workdps(30):
        t0, t1 = mpmath.asin(mpmath.sqrt(lo)), mpmath.asin(mpmath.sqrt(hi))

        def g(t):
            s, c = mpmath.sin(t) ** 2, mpmath.cos(t) ** 2
            return 2 * ((s * mpmath.log(s) if s else 0) + (c * mpmath.log(c) if c else 0))

        return float(mpmath.quad(g, [t0, t1]))


def sample_posterior(a, b, n, rng):
    """Stratified inverse-CDF draws of the truncated arcsine."""
    lo, hi = max(a + b - 1.0, 0.0), min(a, b)
    u0, u1 = math.asin(math.sqrt(lo)), math.asin(math.sqrt(hi))
    u = u0 + (u1 - u0) * (np.arange(n) + rng.uniform(size=n)) / n
    return np.sin(u) ** 2


def kl_vec(p, q):
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(p > 0, p * np.log(p / q), 0.0)
        t2 = np.where(p < 1, (1 - p) * np.log((1 - p) / (1 - q)), 0.0)
    return t1 + t2


def same_three_digits(x, ref):
    return abs(x - ref) <= 0.5 * 10 ** (math.floor(math.log10(abs(ref))) - 2)


class TestNormalization:
    def test_centre(self):
        assert normalization_Z(Marginals(0.5, 0.5)) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_degenerate(self):
        with pytest.raises(DegenerateIntervalError):
            normalization_Z(Marginals(1.0, 1.0))

    def test_symmetric(self):
        assert normalization_Z(Marginals(0.3, 0.9)) == normalization_Z(Marginals(0.9, 0.3))

    def test_matches_arcsin_form(self):
        for a, b in [(0.3, 0.4), (0.8, 0.9), (0.6, 0.55)]:
            lo, hi = max(a + b - 1, 0), min(a, b)
            ref = 2 * math.asin(math.sqrt(hi)) - 2 * math.asin(math.sqrt(lo))
            assert normalization_Z(Marginals(a, b)) == pytest.approx(ref, rel=1e-13)


class TestCoefficients:
    def test_centre(self):
        A, B = coefficients_AB(Marginals(0.5, 0.5))
        assert A == pytest.approx(math.pi / 4 - 0.5, abs=1e-14)
        assert B == pytest.approx(math.pi / 4 + 0.5, abs=1e-14)

    def test_telescoping(self):
        m = Marginals(0.7, 0.4)
        assert sum(coefficients_AB(m)) == pytest.approx(normalization_Z(m), abs=1e-14)

    def test_A_against_quadrature(self):
        m = Marginals(0.6, 0.3)
        iv = feasible_interval(m)
        oracle, _ = quad(lambda x: math.sqrt(x / (1 - x)), iv.lo, iv.hi, epsabs=1e-14, epsrel=1e-13)
        assert coefficients_AB(m)[0] == pytest.approx(oracle, abs=1e-8)

    def test_B_against_quadrature(self):
        m = Marginals(0.85, 0.75)
        iv = feasible_interval(m)
        oracle, _ = quad(lambda x: math.sqrt((1 - x) / x), iv.lo, iv.hi, epsabs=1e-14, epsrel=1e-13)
        assert coefficients_AB(m)[1] == pytest.approx(oracle, abs=1e-10)

    @given(unit_open, unit_open)
    def test_identities(self, a, b):
        m = Marginals(a, b)
        assume(not feasible_interval(m).is_degenerate)
        c = loss_coefficients(m)
        assert c.A >= 0.0 and c.B >= 0.0
        assert c.A + c.B == pytest.approx(c.Z, abs=1e-12)
        assert c.kappa <= 0.0

    def test_degenerate_rows_are_nan(self):
        Z, A, B, kz = coefficient_arrays(np.array([1.0, 0.0]), np.array([0.3, 0.5]))
        np.testing.assert_array_equal(Z, 0.0)
        assert np.all(np.isnan(kz))


class TestKappa:
    def test_centre_against_oracle(self):
        assert kappa(Marginals(0.5, 0.5)) == pytest.approx(kappa_oracle(0.5, 0.5), abs=1e-8)

    def test_random_against_oracle(self):
        rng = np.random.default_rng(5)
        for a, b in rng.uniform(0.001, 0.999, size=(40, 2)):
            assert kappa(Marginals(a, b)) == pytest.approx(kappa_oracle(a, b), abs=1e-9)

    def test_edge_against_oracle(self):
        for a, b in [(1e-4, 0.5), (0.9999, 0.9), (0.5, 0.5000001)]:
            assert kappa(Marginals(a, b)) == pytest.approx(kappa_oracle(a, b), abs=1e-9)

    def test_sign_on_random_pairs(self):
        rng = np.random.default_rng(6)
        a, b = rng.uniform(size=(2, 1000))
        Z, _, _, kz = coefficient_arrays(a, b)
        assert np.all((Z * kz)[np.isfinite(kz)] <= 0.0)

    def test_symmetric(self):
        assert kappa(Marginals(0.2, 0.9)) == kappa(Marginals(0.9, 0.2))


class TestKLBernoulli:
    @pytest.mark.parametrize(
        "p, q, expected",
        [(0.5, 0.5, 0.0), (0.5, 0.25, 0.5 * math.log(4 / 3)), (0.0, 0.5, math.log(2)), (1.0, 0.5, math.log(2))],
    )
    def test_values(self, p, q, expected):
        assert kl_bernoulli(p, q) == pytest.approx(expected, abs=1e-15)
        assert kl_bernoulli(0.5, 0.25) == pytest.approx(0.143841, abs=1e-6)

    @pytest.mark.parametrize("p, q", [(0.3, 0.0), (0.3, 1.0), (0.5, 1.5)])
    def test_domain(self, p, q):
        with pytest.raises(DomainError):
            kl_bernoulli(p, q)

    def test_certain_outcome_at_matching_edge(self):
        assert kl_bernoulli(0.0, 0.0) == 0.0

    @given(st.floats(0.0, 1.0), unit_open)
    def test_nonnegative(self, p, q):
        assert kl_bernoulli(p, q) >= 0.0


class TestExpectedKL:
    def test_minimiser_value(self):
        m = Marginals(0.5, 0.5)
        assert expected_kl(m, 0.5 - 1 / math.pi) == pytest.approx(optimal_expected_kl(m), abs=1e-14)
        assert expected_kl(m, 0.25) >= optimal_expected_kl(m)

    @pytest.mark.parametrize("x", [0.0, 1.0, -0.2])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            expected_kl(Marginals(0.5, 0.5), x)

    def test_degenerate_convention(self):
        m = Marginals(1.0, 0.3)
        assert expected_kl(m, 0.3) == 0.0
        assert expected_kl(m, 0.4) == pytest.approx(kl_bernoulli(0.3, 0.4), rel=1e-15)

    def test_monte_carlo(self):
        rng = np.random.default_rng(2024)
        theta = sample_posterior(0.6, 0.7, 10**6, rng)
        mc = float(np.mean(kl_vec(theta, 0.42)))
        assert same_three_digits(expected_kl(Marginals(0.6, 0.7), 0.42), mc)

    def test_against_direct_quadrature(self):
        m = Marginals(0.6, 0.7)
        iv = feasible_interval(m)
        num, _ = quad(lambda t: kl_bernoulli(t, 0.42) / math.sqrt(t * (1 - t)), iv.lo, iv.hi, epsrel=1e-12, limit=200)
        assert expected_kl(m, 0.42) == pytest.approx(num / normalization_Z(m), rel=1e-9)

    def test_arrays_match_scalar(self):
        a = np.array([0.2, 0.6, 0.95])
        b = np.array([0.7, 0.7, 0.1])
        x = np.array([0.1, 0.42, 0.05])
        ref = [expected_kl(Marginals(*t[:2]), t[2]) for t in zip(a, b, x)]
        np.testing.assert_allclose(expected_kl_arrays(a, b, x), ref, rtol=1e-14)

    @given(unit_open, unit_open, st.floats(0.001, 0.999))
    def test_bregman_gap(self, a, b, x):
        m = Marginals(a, b)
        assume(feasible_interval(m).width > 1e-6)
        assert expected_kl(m, x) >= optimal_expected_kl(m) - 1e-9

    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(0.01, 0.99))
    def test_convex_in_estimate(self, a, b, x):
        m = Marginals(a, b)
        assume(feasible_interval(m).width > 1e-6)
        h = 1e-3
        second = expected_kl(m, x + h) - 2 * expected_kl(m, x) + expected_kl(m, x - h)
        assert second > 0.0


class TestOptimum:
    def test_centre(self):
        assert optimal_estimate(Marginals(0.5, 0.5)) == pytest.approx(0.5 - 1 / math.pi, abs=1e-15)
        assert optimal_estimate(Marginals(0.5, 0.5)) == pytest.approx(0.181690, abs=1e-6)

    def test_forced(self):
        assert optimal_estimate(Marginals(1.0, 0.3)) == 0.3
        assert optimal_expected_kl(Marginals(1.0, 0.3)) == 0.0

    def test_containment_example(self):
        assert 0.2 <= optimal_estimate(Marginals(0.4, 0.8)) <= 0.4

    def test_is_posterior_mean(self):
        m = Marginals(0.35, 0.8)
        iv = feasible_interval(m)
        num, _ = quad(lambda t: t / math.sqrt(t * (1 - t)), iv.lo, iv.hi, epsrel=1e-13)
        assert optimal_estimate(m) == pytest.approx(num / normalization_Z(m), rel=1e-11)

    def test_centre_loss_against_quadrature(self):
        m = Marginals(0.5, 0.5)
        x = 0.5 - 1 / math.pi
        num, _ = quad(lambda t: kl_bernoulli(t, x) / math.sqrt(t * (1 - t)), 0.0, 0.5, epsrel=1e-13, limit=200)
        assert optimal_expected_kl(m) == pytest.approx(num / (math.pi / 2), abs=1e-7)

    def test_substitution_consistency(self):
        m = Marginals(0.5, 0.5)
        assert optimal_expected_kl(m) == pytest.approx(expected_kl(m, optimal_estimate(m)), abs=1e-15)

    def test_nonnegative_on_grid(self):
        c = (np.arange(200) + 0.5) / 200
        a, b = (v.ravel() for v in np.meshgrid(np.r_[0.0, c, 1.0], np.r_[0.0, c, 1.0]))
        values = optimal_expected_kl_arrays(a, b)
        assert np.all(values >= 0.0)

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_within_bounds(self, a, b):
        iv = feasible_interval(Marginals(a, b))
        x = float(optimal_estimate_arrays(np.array(a), np.array(b)))
        assert iv.lo <= x <= iv.hi
