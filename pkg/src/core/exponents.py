"""
Closed-form exponents and bound factors for conditionally symmetric martingales.

Covers the tightened exponent E(gamma, delta) for conditionally symmetric
martingales with bounded jumps, the classical Kullback-Leibler (McDiarmid)
exponent it improves upon, their common value at gamma = 1, and the two
Freedman-type factors C(u) (tightened) and B(u) (classical).

Conventions:
    gamma = sigma^2 / d^2 in [0, 1]   normalized conditional variance bound
    delta = alpha / d >= 0            normalized deviation per step
All exponents are in nats. Only the binary entropy is base 2.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import xlogy

from ..errors import DomainError
from ..utils.numerics import LN2, cosh_minus_one, log1p_cosh_term, sqrt1p_minus_one

logger = logging.getLogger(__name__)

# below this u the Freedman factors switch to their Taylor series
SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class ExponentInput:
    """Normalized pair (gamma, delta) driving the Theorem 1 / Theorem 2 exponents."""
    gamma: float
    delta: float

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if not math.isfinite(self.gamma) or not 0.0 <= self.gamma <= 1.0:
            raise DomainError(f"gamma must lie in [0, 1], got: {self.gamma}")
        if not math.isfinite(self.delta) or self.delta < 0.0:
            raise DomainError(f"delta must be a finite real >= 0, got: {self.delta}")

    @classmethod
    def from_physical(cls, sigma2: float, d: float, alpha: float) -> 'ExponentInput':
        """Normalize a variance bound sigma2, jump bound d and deviation alpha."""
        if not d > 0:
            raise DomainError(f"d must be positive, got: {d}")
        return cls(gamma=sigma2 / d ** 2, delta=alpha / d)


@dataclass(frozen=True)
class ExponentValue:
    """An exponent in nats, possibly +inf, with the optimizing x when one exists."""
    value: float
    optimizer_x: Optional[float] = None

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


@dataclass(frozen=True)
class FreedmanInput:
    """Deviation level z, quadratic-variation cap r and one-sided jump bound d."""
    z: float
    r: float
    d: float

    def __post_init__(self):
        for name in ('z', 'r', 'd'):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be a finite real > 0, got: {value}")

    @property
    def u(self) -> float:
        return self.z * self.d / self.r


@dataclass(frozen=True)
class BoundValue:
    """A probability bound as written (raw) and capped at one (clamped)."""
    raw: float
    clamped: float

    @classmethod
    def of(cls, raw: float) -> 'BoundValue':
        return cls(raw=raw, clamped=min(1.0, raw))


def optimal_x(inp: ExponentInput) -> float:
    """
    Optimizing x of the tightened exponent for 0 < gamma <= 1, 0 <= delta < 1.

    x = ln( [delta (1-gamma) + sqrt(delta^2 (1-gamma)^2 + gamma^2 (1-delta^2))]
            / [gamma (1-delta)] )

    Raises:
        DomainError: If gamma = 0 or delta >= 1 (handled by exponent_cs)
    """
    gamma, delta = inp.gamma, inp.delta
    if gamma == 0.0:
        raise DomainError("optimal_x requires gamma > 0")
    if delta >= 1.0:
        raise DomainError(f"optimal_x requires delta < 1, got: {delta}")

    a = delta * (1.0 - gamma)
    numerator = a + math.sqrt(a * a + gamma * gamma * (1.0 - delta) * (1.0 + delta))
    return math.log(numerator / (gamma * (1.0 - delta)))


def exponent_objective(x, gamma: float, delta: float):
    """delta x - ln(1 + gamma (cosh x - 1)), the Chernoff exponent at tilt x."""
    return delta * np.asarray(x, dtype=float) - log1p_cosh_term(gamma, x)


def exponent_cs(inp: ExponentInput) -> ExponentValue:
    """
    Tightened exponent E(gamma, delta) for conditionally symmetric martingales.

    Branches:
        gamma = 0       -> 0 if delta = 0 else +inf (a.s. constant martingale)
        delta = 0       -> 0
        delta > 1       -> +inf (the event is impossible under bounded jumps)
        delta = 1       -> ln(2 / gamma)
        otherwise       -> objective at the closed-form optimal x
    """
    gamma, delta = inp.gamma, inp.delta
    if gamma == 0.0:
        return ExponentValue(0.0 if delta == 0.0 else math.inf)
    if delta == 0.0:
        return ExponentValue(0.0, 0.0)
    if delta > 1.0:
        return ExponentValue(math.inf)
    if delta == 1.0:
        return ExponentValue(math.log(2.0 / gamma))

    x = optimal_x(inp)
    value = float(exponent_objective(x, gamma, delta))
    return ExponentValue(max(value, 0.0), x)


def kl_divergence(p: float, q: float) -> float:
    """
    Binary relative entropy D(p || q) in nats, with 0 ln 0 = 0.

    Raises:
        DomainError: If p is outside [0, 1], or q is in {0, 1} while p != q
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got: {p}")
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [0, 1], got: {q}")
    if p == q:
        return 0.0
    if q in (0.0, 1.0):
        raise DomainError(f"kl_divergence is infinite for q = {q} and p = {p}")

    value = xlogy(p, p / q) + xlogy(1.0 - p, (1.0 - p) / (1.0 - q))
    return max(float(value), 0.0)


def exponent_kl(inp: ExponentInput) -> ExponentValue:
    """
    Classical exponent D((delta+gamma)/(1+gamma) || gamma/(1+gamma)).

    At delta = 1 this equals its left limit ln(1 + 1/gamma); above 1 it is +inf.

    Raises:
        DomainError: If gamma = 0
    """
    gamma, delta = inp.gamma, inp.delta
    if gamma == 0.0:
        raise DomainError("exponent_kl requires gamma > 0")
    if delta > 1.0:
        return ExponentValue(math.inf)
    if delta == 1.0:
        return ExponentValue(math.log1p(1.0 / gamma))

    p = (delta + gamma) / (1.0 + gamma)
    q = gamma / (1.0 + gamma)
    return ExponentValue(kl_divergence(p, q))


def binary_entropy(x: float) -> float:
    """h2(x) = -x log2 x - (1-x) log2(1-x), zero at both endpoints."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary_entropy requires x in [0, 1], got: {x}")
    return float(-(xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)) / LN2)


def common_exponent_gamma1(delta: float) -> float:
    """
    Shared value of both exponents at gamma = 1: ln 2 (1 - h2((1-delta)/2)).

    Evaluated in nats directly as ln 2 + p ln p + (1-p) ln(1-p), p = (1-delta)/2,
    which is the same quantity without the base-2 round trip.
    """
    if not math.isfinite(delta) or delta < 0.0:
        raise DomainError(f"delta must be a finite real >= 0, got: {delta}")
    if delta > 1.0:
        return math.inf
    p = (1.0 - delta) / 2.0
    return max(float(LN2 + xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)), 0.0)


def freedman_B(u: float) -> float:
    """
    Classical Freedman factor B(u) = 2[(1+u) ln(1+u) - u] / u^2.

    Raises:
        DomainError: If u <= 0
    """
    if not u > 0:
        raise DomainError(f"freedman_B requires u > 0, got: {u}")
    if u < SERIES_CUTOFF:
        return 1.0 - u / 3.0 + u * u / 6.0 - u ** 3 / 10.0
    return 2.0 * ((1.0 + u) * math.log1p(u) - u) / (u * u)


def freedman_C(u: float) -> float:
    """
    Tightened Freedman factor C(u) = 2[u asinh(u) - sqrt(1+u^2) + 1] / u^2.

    Raises:
        DomainError: If u <= 0
    """
    if not u > 0:
        raise DomainError(f"freedman_C requires u > 0, got: {u}")
    if u < SERIES_CUTOFF:
        u2 = u * u
        return 1.0 - u2 / 12.0 + u2 * u2 / 40.0 - 5.0 * u2 ** 3 / 448.0
    return 2.0 * (u * math.asinh(u) - float(sqrt1p_minus_one(u * u))) / (u * u)


def _tail_bound(n: int, exponent: ExponentValue, two_sided: bool) -> BoundValue:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got: {n}")
    factor = 2.0 if two_sided else 1.0
    if exponent.is_infinite:
        return BoundValue.of(0.0)
    return BoundValue.of(factor * math.exp(-n * exponent.value))


def tail_bound_t1(n: int, inp: ExponentInput, two_sided: bool = True) -> BoundValue:
    """
    Tightened bound on P(max_k |X_k - X_0| >= alpha n): 2 exp(-n E(gamma, delta)).

    With two_sided=False the factor 2 is dropped, which is the one-sided bound
    for martingales and for conditionally symmetric super/submartingales.
    """
    return _tail_bound(n, exponent_cs(inp), two_sided)


def tail_bound_t2(n: int, inp: ExponentInput, two_sided: bool = True) -> BoundValue:
    """Classical bound 2 exp(-n D((delta+gamma)/(1+gamma) || gamma/(1+gamma)))."""
    return _tail_bound(n, exponent_kl(inp), two_sided)


def freedman_bound(inp: FreedmanInput, variant: str = "tightened") -> float:
    """
    Freedman-type bound exp(-z^2/(2r) * F(zd/r)) with F = C (tightened) or B (classical).
    """
    if variant == "tightened":
        factor = freedman_C(inp.u)
    elif variant == "classical":
        factor = freedman_B(inp.u)
    else:
        raise DomainError(f"variant must be 'tightened' or 'classical', got: {variant}")
    return math.exp(-inp.z ** 2 / (2.0 * inp.r) * factor)


def mgf_bound(gamma: float, x: float, symmetric: bool = True) -> float:
    """
    Upper bound on E[exp(x X / d)] for a zero-mean X <= d with E[X^2] <= gamma d^2.

    symmetric=True gives the refined bound 1 + gamma (cosh x - 1), attained by the
    three-point law; symmetric=False gives Bennett's bound
    (gamma e^x + e^{-gamma x}) / (1 + gamma), attained by the two-point law,
    valid for x >= 0.
    """
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"gamma must lie in [0, 1], got: {gamma}")
    if symmetric:
        return float(1.0 + gamma * cosh_minus_one(x))
    if x < 0:
        raise DomainError(f"Bennett's bound requires x >= 0, got: {x}")
    return (gamma * math.exp(x) + math.exp(-gamma * x)) / (1.0 + gamma)
