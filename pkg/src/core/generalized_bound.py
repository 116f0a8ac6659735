"""
Higher-moment bound for conditionally symmetric martingales.

Given a jump bound d and ceilings mu_2, mu_4, ..., mu_m on the even conditional
moments, the tail of max_k |X_k - X_0| is bounded by

    2 * { min_{x >= 0} e^{-delta x} [ 1 + sum_{l=1}^{m/2-1} (g_{2l} - g_m) x^{2l} / (2l)!
                                       + g_m (cosh x - 1) ] }^n

with delta = alpha / d and g_{2l} = mu_{2l} / d^{2l}. There is no closed form,
so the minimum is found by bracketing plus golden-section search.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError, ProfileValidationError
from ..utils.numerics import cosh_minus_one
from .exponents import BoundValue, ExponentInput, tail_bound_t1

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0

# cosh overflows a double just above 710
EXPANSION_CAP = 700.0
DEFAULT_TOL = 1e-10
MAX_ITERATIONS = 200
CHAIN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MomentProfile:
    """
    Jump bound d and ceilings on the even conditional moments mu_2, ..., mu_m.

    The normalized ceilings gamma_{2l} = mu_{2l} / d^{2l} must form the chain
    1 >= gamma_2 >= gamma_4 >= ... >= gamma_m >= 0, which every random variable
    with |xi / d| <= 1 satisfies. Profiles that break it are rejected.
    """
    d: float
    m: int
    mu: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'mu', tuple(float(v) for v in self.mu))
        self._validate()

    def _validate(self):
        if not math.isfinite(self.d) or self.d <= 0:
            raise ProfileValidationError(f"d must be a finite real > 0, got: {self.d}")
        if not isinstance(self.m, (int, np.integer)) or self.m < 2 or self.m % 2:
            raise ProfileValidationError(f"m must be an even integer >= 2, got: {self.m}")
        if len(self.mu) != self.m // 2:
            raise ProfileValidationError(
                f"expected {self.m // 2} moment ceilings (mu_2 ... mu_{self.m}), got {len(self.mu)}"
            )
        if any(not math.isfinite(v) or v < 0 for v in self.mu):
            raise ProfileValidationError(f"moment ceilings must be finite and >= 0, got: {self.mu}")

        chain = (1.0,) + self.gamma + (0.0,)
        for left, right in zip(chain, chain[1:]):
            if right > left + CHAIN_TOLERANCE:
                raise ProfileValidationError(
                    "normalized moments must satisfy 1 >= gamma_2 >= gamma_4 >= ... >= gamma_m >= 0, "
                    f"got: {[round(g, 12) for g in self.gamma]}"
                )

    @property
    def gamma(self) -> Tuple[float, ...]:
        """Normalized ceilings (gamma_2, gamma_4, ..., gamma_m)."""
        return tuple(mu / self.d ** (2 * (i + 1)) for i, mu in enumerate(self.mu))

    @property
    def gamma_m(self) -> float:
        return self.gamma[-1]

    @classmethod
    def from_gammas(cls, d: float, gammas: Sequence[float]) -> 'MomentProfile':
        """Build a profile from normalized ceilings instead of raw moments."""
        mu = tuple(g * d ** (2 * (i + 1)) for i, g in enumerate(gammas))
        return cls(d=d, m=2 * len(mu), mu=mu)


@dataclass(frozen=True)
class MinimizeResult:
    """Outcome of a bracketed golden-section minimization on [0, cap]."""
    x_star: float
    objective_value: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class GeneralizedBound:
    """Theorem 3 bound with the minimizer outcome behind it."""
    bound: BoundValue
    x_star: Optional[float]
    objective_value: Optional[float]
    status: str
    metadata: Dict[str, str] = field(default_factory=dict)

    @property
    def raw(self) -> float:
        return self.bound.raw

    @property
    def clamped(self) -> float:
        return self.bound.clamped


def t3_objective(x: float, delta: float, profile: MomentProfile) -> float:
    """e^{-delta x} [1 + sum_l (g_{2l} - g_m) x^{2l}/(2l)! + g_m (cosh x - 1)]."""
    gammas = profile.gamma
    g_m = gammas[-1]
    bracket = 1.0 + g_m * float(cosh_minus_one(x))
    for l, g in enumerate(gammas[:-1], start=1):
        bracket += (g - g_m) * x ** (2 * l) / math.factorial(2 * l)
    return math.exp(-delta * x) * bracket


def _bracket(f: Callable[[float], float], cap: float) -> Tuple[float, float, float, bool]:
    """Double from [0, 1] until f increases. Returns (lo, hi, f(0), found)."""
    f0 = f(0.0)
    p0, p1 = 0.0, 1.0
    f1 = f(p1)
    if f1 >= f0:
        return 0.0, 1.0, f0, True

    while True:
        p2 = min(2.0 * p1, cap)
        f2 = f(p2)
        if f2 > f1:
            return p0, p2, f0, True
        if p2 >= cap:
            return p1, p2, f0, False
        p0, p1, f1 = p1, p2, f2


def minimize_convex_univariate(
    f: Callable[[float], float],
    tol: float = DEFAULT_TOL,
    max_iterations: int = MAX_ITERATIONS,
    cap: float = EXPANSION_CAP,
) -> MinimizeResult:
    """
    Minimize a unimodal-or-monotone f over [0, cap].

    The bracket is found by doubling from [0, 1]; golden-section search then
    narrows it to width below tol. If f is still decreasing at the cap the
    result carries converged=False and x_star = cap.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got: {tol}")

    a, b, f0, found = _bracket(f, cap)
    if not found:
        value = f(cap)
        logger.warning(f"Minimizer hit the expansion cap x={cap} while f was still decreasing")
        if value <= f0:
            return MinimizeResult(cap, value, 0, False)
        return MinimizeResult(0.0, f0, 0, False)

    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    iterations = 0
    while h > tol and iterations < max_iterations:
        if fc < fd:
            b, d, fd = d, c, fc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = INV_PHI * h
            d = a + INV_PHI * h
            fd = f(d)
        iterations += 1

    candidates = [(f0, 0.0), (fc, c), (fd, d), (f(a), a), (f(b), b)]
    value, x_star = min(candidates)
    converged = (b - a) <= tol
    if not converged:
        logger.warning(f"Golden-section search stopped after {iterations} iterations, width {b - a:.3g}")
    return MinimizeResult(x_star, value, iterations, converged)


def tail_bound_t3(
    n: int,
    alpha: float,
    profile: MomentProfile,
    two_sided: bool = True,
    tol: float = DEFAULT_TOL,
) -> GeneralizedBound:
    """
    Higher-moment bound on P(max_k |X_k - X_0| >= alpha n).

    delta > 1 gives 0 (jumps are bounded by d). At delta = 1 the minimum is an
    infimum at x -> inf: writing cosh x - 1 = (e^x + e^-x)/2 - 1,

        e^{-x}[...] = g_m/2 + e^{-x} (1 - g_m + poly(x)) + g_m e^{-2x}/2 -> g_m/2

    from above, so the bound is factor * (g_m/2)^n. For m = 2 this matches
    E(gamma, 1) = ln(2/gamma). A minimizer that fails to converge yields the
    gamma_2-only bound, which is always valid, flagged as 'vacuous'.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got: {n}")
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"alpha must be a finite real >= 0, got: {alpha}")

    factor = 2.0 if two_sided else 1.0
    delta = alpha / profile.d

    if delta > 1.0:
        return GeneralizedBound(BoundValue.of(0.0), None, None, 'impossible')

    if delta == 1.0:
        value = profile.gamma_m / 2.0
        logger.warning("delta = 1: using the x -> inf limit of the moment objective")
        return GeneralizedBound(
            BoundValue.of(factor * value ** n),
            math.inf,
            value,
            'delta_one_limit',
            {'extension': 'delta=1 limit g_m/2'},
        )

    result = minimize_convex_univariate(lambda x: t3_objective(x, delta, profile), tol=tol)
    if not result.converged:
        fallback = tail_bound_t1(n, ExponentInput(profile.gamma[0], delta), two_sided)
        return GeneralizedBound(
            fallback,
            result.x_star,
            result.objective_value,
            'vacuous',
            {'fallback': 'second-moment bound used; minimizer did not converge'},
        )

    raw = factor * math.exp(n * math.log(result.objective_value))
    logger.info(f"T3 minimum {result.objective_value:.12g} at x={result.x_star:.6g} "
                f"after {result.iterations} iterations")
    return GeneralizedBound(BoundValue.of(raw), result.x_star, result.objective_value, 'ok')
