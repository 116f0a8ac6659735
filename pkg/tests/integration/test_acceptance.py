"""
End-to-end checks of the bounds against closed forms, exact oracles and simulation.

The Monte Carlo checks at full size are marked slow; run them with
`pytest -m slow`.
"""

import math

import numpy as np
import pytest

from src.core.exact_oracle import (
    LatticeLaw,
    certificate_check,
    exact_freedman_deterministic_q,
    exact_max_tail,
    rate_convergence,
    refined_bennett_check,
    theta_min,
)
from src.core.exponents import (
    ExponentInput,
    FreedmanInput,
    binary_entropy,
    exponent_cs,
    exponent_kl,
    freedman_B,
    freedman_C,
    freedman_bound,
    tail_bound_t1,
    tail_bound_t2,
)
from src.core.generalized_bound import MomentProfile, tail_bound_t3
from src.core.simulator import IncrementLaw, MartingaleSpec, WeightRule, estimate_tail

FREEDMAN_EXACT = 0.18924713134765625
RATE_N_VALUES = [250, 500, 1000, 2000]


class TestExponentAgreement:
    """Test the exponents against their closed forms."""

    def test_gamma_one_coincidence(self):
        """Test both exponents equal ln 2 (1 - h2((1 - delta)/2)) at gamma = 1."""
        for delta in np.round(np.arange(0, 101) / 100, 2):
            inp = ExponentInput(1.0, float(delta))
            expected = math.log(2) * (1 - binary_entropy((1 - delta) / 2))
            cs, kl = exponent_cs(inp).value, exponent_kl(inp).value
            assert abs(cs - kl) <= 1e-12
            if delta < 1:
                assert cs == pytest.approx(expected, abs=1e-12)

    def test_strict_tightening_grid(self):
        """Test exponent_cs > exponent_kl on the interior grid."""
        for gamma in np.arange(1, 10) / 10:
            for delta in np.arange(1, 10) / 10:
                inp = ExponentInput(float(gamma), float(delta))
                assert exponent_cs(inp).value - exponent_kl(inp).value > 0

    def test_spot_values(self):
        """Test (0.5, 0.5) against the closed forms."""
        inp = ExponentInput(0.5, 0.5)
        assert exponent_cs(inp).value == pytest.approx(0.5 * math.log(3) - math.log(4 / 3), abs=1e-10)
        assert exponent_kl(inp).value == pytest.approx(math.log(2) / 3, abs=1e-10)

    @pytest.mark.parametrize("gamma", [0.25, 0.5, 0.75, 1.0])
    def test_limits_near_delta_one(self, gamma):
        """Test the exponents approach ln(2/gamma) and ln(1 + 1/gamma)."""
        inp = ExponentInput(gamma, 1 - 1e-6)
        assert abs(exponent_cs(inp).value - math.log(2 / gamma)) <= 1e-4
        assert abs(exponent_kl(inp).value - math.log(1 + 1 / gamma)) <= 1e-4


class TestHigherMomentReduction:
    """Test the higher-moment bound against the second-moment bound."""

    def test_random_reduction(self):
        """Test m = 2 matches and gamma_4 < gamma_2 tightens."""
        rng = np.random.default_rng(4)
        for _ in range(20):
            gamma = float(rng.uniform(0.05, 1.0))
            delta = float(rng.uniform(0.01, 0.99))
            n = int(rng.integers(1, 51))
            t1 = tail_bound_t1(n, ExponentInput(gamma, delta)).raw
            assert tail_bound_t3(n, delta, MomentProfile.from_gammas(1.0, (gamma,))).raw == pytest.approx(t1, rel=1e-8)
            tighter = MomentProfile.from_gammas(1.0, (gamma, gamma * float(rng.uniform(0, 1))))
            assert tail_bound_t3(n, delta, tighter).raw <= t1 * (1 + 1e-8)


class TestFreedmanTightening:
    """Test the Freedman factors and bounds."""

    def test_factor_ordering(self):
        """Test C(u) >= B(u) on a log grid over [1e-6, 1e6]."""
        for u in np.geomspace(1e-6, 1e6, 1000):
            assert freedman_C(float(u)) >= freedman_B(float(u))

    def test_bound_ordering(self):
        """Test tightened <= classical over a grid of (z, r, d)."""
        for z in (0.5, 1.0, 3.0, 10.0):
            for r in (0.1, 1.0, 5.0, 50.0):
                for d in (0.1, 1.0, 4.0):
                    inp = FreedmanInput(z, r, d)
                    assert freedman_bound(inp, 'tightened') <= freedman_bound(inp, 'classical')

    def test_spot_values(self):
        """Test C(1) and B(1)."""
        assert freedman_C(1.0) == pytest.approx(0.9343201, abs=1e-7)
        assert freedman_B(1.0) == pytest.approx(0.7725887, abs=1e-7)


class TestExactDomination:
    """Test exact probabilities never exceed the bounds."""

    def test_running_max_below_t1(self):
        """Test exact two-sided running-max tails against the T1 bound for n <= 25."""
        violations = []
        for gamma in np.arange(1, 11) / 10:
            law = LatticeLaw.three_point(float(gamma))
            for delta in np.arange(1, 11) / 10:
                for n in range(1, 26):
                    exact = exact_max_tail(law, n, float(delta) * n, 'two_sided')
                    bound = tail_bound_t1(n, ExponentInput(float(gamma), float(delta))).raw
                    if exact > bound * (1 + 1e-9):
                        violations.append((gamma, delta, n, exact, bound))
        assert violations == []

    def test_running_max_below_t2(self):
        """Test exact one-sided running-max tails of the two-point law against the T2 bound for n <= 25."""
        violations = []
        for gamma in np.arange(1, 11) / 10:
            law = LatticeLaw.two_point(float(gamma))
            for delta in np.arange(1, 11) / 10:
                for n in range(1, 26):
                    exact = exact_max_tail(law, n, float(delta) * n, 'one_sided')
                    bound = tail_bound_t2(n, ExponentInput(float(gamma), float(delta)), two_sided=False).raw
                    if exact > bound * (1 + 1e-9):
                        violations.append((gamma, delta, n, exact, bound))
        assert violations == []

    def test_freedman_exact(self):
        """Test the exact Freedman probability sits below both bounds."""
        value = exact_freedman_deterministic_q(LatticeLaw.three_point(0.5), 0.5, 3.0, 5.0)
        inp = FreedmanInput(3.0, 5.0, 1.0)
        assert value == pytest.approx(FREEDMAN_EXACT, abs=1e-15)
        assert value <= freedman_bound(inp, 'tightened') <= freedman_bound(inp, 'classical')


class TestAsymptoticOptimality:
    """Test exact rates approach the exponents."""

    @pytest.mark.parametrize("law", ['symmetric', 'mcdiarmid'])
    def test_gaps_shrink(self, law):
        """Test gaps are positive, strictly decreasing and below 0.01 at n = 2000."""
        estimate = rate_convergence(0.5, 0.4, RATE_N_VALUES, law=law)
        assert estimate.metadata['threshold_rounding'] == 'none'
        assert estimate.gaps_positive
        assert estimate.gaps_decreasing
        assert estimate.gaps[-1] <= 0.01

    def test_gamma_one_rate(self):
        """Test the gamma = 1 rate approaches ln 2 (1 - h2(0.25))."""
        estimate = rate_convergence(1.0, 0.5, [1000])
        assert abs(estimate.empirical_rates[0] - math.log(2) * (1 - binary_entropy(0.25))) <= 0.01


class TestIdentities:
    """Test the refined Bennett equality and the certificate threshold."""

    def test_refined_bennett_random(self):
        """Test equality for 50 random (gamma, d, lambda)."""
        rng = np.random.default_rng(11)
        for _ in range(50):
            gamma = float(rng.uniform(0.01, 1.0))
            d = float(rng.uniform(0.1, 2.0))
            lam = float(rng.uniform(-3.0, 3.0))
            assert refined_bennett_check(gamma, d, lam).equal

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_certificate_threshold(self, lam):
        """Test the certificate holds at theta_min and fails just below."""
        grid = np.concatenate([np.geomspace(1e-6, 1.0, 200), np.linspace(0.0, 10.0, 101)])
        assert certificate_check(lam, math.cosh(lam) - 1, grid)
        assert not certificate_check(lam, theta_min(lam) - 1e-3, grid)


@pytest.mark.slow
class TestMonteCarloSoundness:
    """Test simulated tails against exact values and bounds."""

    def test_wilson_coverage(self):
        """Test 100 seeded runs: coverage of the exact value and no excess over T1."""
        spec = MartingaleSpec(IncrementLaw.three_point(0.5), WeightRule(), 10)
        exact = exact_max_tail(LatticeLaw.three_point(0.5), 10, 3.0, 'two_sided')
        bound = tail_bound_t1(10, ExponentInput(0.5, 0.3)).raw
        covered = 0
        for seed in range(100):
            estimate = estimate_tail(spec, 0.3, 'two_sided_max', 100_000, seed)
            covered += estimate.ci_low <= exact <= estimate.ci_high
            assert estimate.p_hat <= bound + 3 * estimate.half_width
        assert covered >= 90

    def test_supermartingale_one_sided(self):
        """Test the shifted construction stays below exp(-n E)."""
        spec = MartingaleSpec(IncrementLaw.shifted(0.5, -0.05), WeightRule(), 20)
        estimate = estimate_tail(spec, 0.4, 'one_sided_max', 1_000_000, 3)
        bound = tail_bound_t1(20, ExponentInput(0.5, 0.4), two_sided=False).raw
        assert bound == pytest.approx(math.exp(-20 * exponent_cs(ExponentInput(0.5, 0.4)).value))
        assert estimate.ci_low <= bound
