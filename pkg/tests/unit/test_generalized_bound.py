"""
Unit tests for the higher-moment bound and its univariate minimizer.
"""

import math

import numpy as np
import pytest

from src.core.exponents import ExponentInput, tail_bound_t1
from src.core.generalized_bound import (
    MinimizeResult,
    MomentProfile,
    minimize_convex_univariate,
    t3_objective,
    tail_bound_t3,
)
from src.errors import DomainError, ProfileValidationError


class TestMomentProfile:
    """Test moment profile validation."""

    def test_valid_profile(self):
        """Test normalized ceilings are derived from raw moments."""
        profile = MomentProfile(d=2.0, m=4, mu=(2.0, 4.0))
        assert profile.gamma == pytest.approx((0.5, 0.25))
        assert profile.gamma_m == pytest.approx(0.25)

    def test_from_gammas(self):
        """Test building from normalized ceilings."""
        profile = MomentProfile.from_gammas(2.0, (0.5, 0.25))
        assert profile.mu == pytest.approx((2.0, 4.0))
        assert profile.m == 4

    @pytest.mark.parametrize("m", [3, 0, -2])
    def test_invalid_order(self, m):
        """Test m must be an even integer >= 2."""
        with pytest.raises(ProfileValidationError, match="m must be"):
            MomentProfile(d=1.0, m=m, mu=(0.5,))

    def test_wrong_length(self):
        """Test the number of ceilings must be m/2."""
        with pytest.raises(ProfileValidationError, match="expected 2 moment ceilings"):
            MomentProfile(d=1.0, m=4, mu=(0.5,))

    def test_non_monotone_chain(self):
        """Test gamma_4 > gamma_2 is rejected."""
        with pytest.raises(ProfileValidationError, match="normalized moments"):
            MomentProfile(d=1.0, m=4, mu=(0.3, 0.5))

    def test_variance_above_jump_bound(self):
        """Test gamma_2 > 1 is rejected."""
        with pytest.raises(ProfileValidationError):
            MomentProfile(d=1.0, m=2, mu=(1.5,))

    def test_is_domain_error(self):
        """Test profile errors are domain errors."""
        with pytest.raises(DomainError):
            MomentProfile(d=-1.0, m=2, mu=(0.5,))


class TestMinimizer:
    """Test bracketing plus golden-section search."""

    def test_quadratic(self):
        """Test the minimum of (x - 3)^2 is found."""
        result = minimize_convex_univariate(lambda x: (x - 3.0) ** 2)
        assert result.converged
        assert result.x_star == pytest.approx(3.0, abs=1e-6)
        assert result.objective_value == pytest.approx(0.0, abs=1e-12)

    def test_increasing_function(self):
        """Test an increasing function is minimized at zero."""
        result = minimize_convex_univariate(lambda x: math.exp(x))
        assert result.x_star == pytest.approx(0.0, abs=1e-9)
        assert result.objective_value == pytest.approx(1.0)

    def test_decreasing_to_cap(self):
        """Test a function still decreasing at the cap is flagged."""
        result = minimize_convex_univariate(lambda x: math.exp(-x), cap=50.0)
        assert not result.converged
        assert result.x_star == 50.0

    def test_invalid_tolerance(self):
        """Test tol must be positive."""
        with pytest.raises(DomainError):
            minimize_convex_univariate(lambda x: x * x, tol=0.0)

    @pytest.mark.parametrize("gammas,delta", [((0.5, 0.25), 0.5), ((0.4, 0.1), 0.3)])
    def test_higher_moment_minimum_is_global(self, gammas, delta):
        """Test the minimizer's value is no larger than a dense grid and 1000 uniform samples."""
        profile = MomentProfile.from_gammas(1.0, gammas)
        result = minimize_convex_univariate(lambda x: t3_objective(x, delta, profile))
        assert result.converged
        upper = 4.0 * max(result.x_star, 1.0)
        grid = np.linspace(0.0, upper, 40001)
        samples = np.random.default_rng(0).uniform(0.0, upper, 1000)
        grid_values = np.array([t3_objective(float(x), delta, profile) for x in grid])
        sample_values = np.array([t3_objective(float(x), delta, profile) for x in samples])
        assert result.objective_value <= grid_values.min() + 1e-12
        assert np.all(result.objective_value <= sample_values + 1e-12)


class TestTailBoundT3:
    """Test the higher-moment bound."""

    def test_spot_value(self):
        """Test n=10, alpha=0.5, d=1 with mu_2=0.5, mu_4=0.25."""
        result = tail_bound_t3(10, 0.5, MomentProfile(d=1.0, m=4, mu=(0.5, 0.25)))
        assert result.status == 'ok'
        assert result.x_star == pytest.approx(1.23831, abs=1e-4)
        assert result.objective_value == pytest.approx(0.758676053317, rel=1e-9)
        assert result.raw == pytest.approx(0.126355385976, rel=1e-8)

    def test_objective_matches_manual_expansion(self):
        """Test the objective at a fixed x."""
        profile = MomentProfile.from_gammas(1.0, (0.5, 0.25))
        x = 1.0
        expected = math.exp(-0.5) * (1 + 0.25 * x ** 2 / 2 + 0.25 * (math.cosh(x) - 1))
        assert t3_objective(x, 0.5, profile) == pytest.approx(expected, rel=1e-14)

    def test_reduces_to_t1_for_m2(self):
        """Test m = 2 reproduces the closed-form bound for random inputs."""
        rng = np.random.default_rng(20240611)
        for _ in range(20):
            gamma = float(rng.uniform(0.05, 1.0))
            delta = float(rng.uniform(0.01, 0.95))
            n = int(rng.integers(1, 51))
            t3 = tail_bound_t3(n, delta, MomentProfile.from_gammas(1.0, (gamma,)))
            t1 = tail_bound_t1(n, ExponentInput(gamma, delta))
            assert t3.raw == pytest.approx(t1.raw, rel=1e-8)

    def test_fourth_moment_tightens(self):
        """Test gamma_4 < gamma_2 never loosens the bound."""
        rng = np.random.default_rng(7)
        for _ in range(20):
            gamma2 = float(rng.uniform(0.1, 1.0))
            gamma4 = gamma2 * float(rng.uniform(0.0, 1.0))
            delta = float(rng.uniform(0.05, 0.95))
            n = int(rng.integers(1, 51))
            t3 = tail_bound_t3(n, delta, MomentProfile.from_gammas(1.0, (gamma2, gamma4)))
            t1 = tail_bound_t1(n, ExponentInput(gamma2, delta))
            assert t3.raw <= t1.raw * (1 + 1e-8)

    def test_impossible_event(self):
        """Test delta > 1 gives zero."""
        result = tail_bound_t3(5, 1.5, MomentProfile(d=1.0, m=2, mu=(0.5,)))
        assert result.status == 'impossible'
        assert result.raw == 0.0

    def test_delta_one_limit(self):
        """Test delta = 1 uses the limit gamma_m / 2 and matches T1 at m = 2."""
        result = tail_bound_t3(6, 2.0, MomentProfile(d=2.0, m=2, mu=(2.0,)))
        assert result.status == 'delta_one_limit'
        assert result.raw == pytest.approx(2 * 0.25 ** 6, rel=1e-12)
        assert result.raw == pytest.approx(tail_bound_t1(6, ExponentInput(0.5, 1.0)).raw, rel=1e-12)
        assert 'extension' in result.metadata

    def test_one_sided(self):
        """Test the one-sided bound is half the two-sided one."""
        profile = MomentProfile.from_gammas(1.0, (0.6, 0.3, 0.2))
        two = tail_bound_t3(12, 0.4, profile)
        one = tail_bound_t3(12, 0.4, profile, two_sided=False)
        assert one.raw == pytest.approx(two.raw / 2)

    def test_fallback_when_minimizer_fails(self, mocker):
        """Test a non-converged minimizer falls back to the second-moment bound."""
        mocker.patch(
            'src.core.generalized_bound.minimize_convex_univariate',
            return_value=MinimizeResult(700.0, 1e-300, 0, False),
        )
        profile = MomentProfile.from_gammas(1.0, (0.5, 0.25))
        result = tail_bound_t3(10, 0.5, profile)
        assert result.status == 'vacuous'
        assert result.raw == pytest.approx(tail_bound_t1(10, ExponentInput(0.5, 0.5)).raw)

    @pytest.mark.parametrize("n", [0, 1.5])
    def test_invalid_n(self, n):
        """Test n must be a positive integer."""
        with pytest.raises(DomainError):
            tail_bound_t3(n, 0.5, MomentProfile(d=1.0, m=2, mu=(0.5,)))
