"""
Exact Lattice Oracle Component

Exact tail probabilities for sums of i.i.d. increments supported on a lattice
{k * step}. Distributions are propagated by iterated convolution over the live
window of lattice states:

- exact_tail: P(S_n >= t)
- exact_max_tail: P(max_k S_k >= b) or P(max_k |S_k| >= b), by absorbing mass
  that crosses the barrier at every step (reflection does not hold for laws
  with an atom at zero)
- exact_freedman_deterministic_q: the Freedman event when Q_k = k * qstep
- exact_log_tail: ln P(S_n >= t) through an exponential change of measure, for
  probabilities that would underflow a double

The module also verifies the moment identities behind the bounds: the refined
Bennett equality for the three-point law, Bennett's equality for the two-point
law, the convex-moment inequality, and the supermartingale certificate.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq
from scipy.special import logsumexp

from ..config.settings import OracleConfig
from ..errors import DomainError, LawValidationError, MassConservationError, ResourceGuardError
from ..utils.numerics import cosh_minus_one
from .exponents import ExponentInput, exponent_cs, exponent_kl, mgf_bound
from .simulator import IncrementLaw

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-14
SUPPORT_RTOL = 1e-12
QSTEP_TOLERANCE = 1e-12
# thresholds within this many lattice steps of a lattice point count as on it
LATTICE_SLACK = 1e-9
# below this probability rate_convergence switches to the log-scale oracle
LOG_SCALE_CUTOFF = 1e-280
EQUALITY_RTOL = 1e-14
CERTIFICATE_SLACK = 1e-15

MAX_MODES = ('one_sided', 'two_sided')
LAW_NAMES = ('symmetric', 'mcdiarmid')
CERTIFICATE_VARIANTS = ('tightened', 'classical')


@dataclass(frozen=True)
class LatticeLaw:
    """
    Finite law on the lattice {k * step}: atoms maps integer offsets k to probabilities.

    Zero-probability atoms are dropped. When d is given every atom must satisfy
    |k * step| <= d.
    """
    step: float
    atoms: Dict[int, float] = field(hash=False)
    d: Optional[float] = None

    def __post_init__(self):
        cleaned = {}
        for offset, prob in dict(self.atoms).items():
            if int(offset) != offset:
                raise LawValidationError(f"lattice offsets must be integers, got: {offset}")
            if not math.isfinite(prob) or prob < 0:
                raise LawValidationError(f"atom probabilities must be finite and >= 0, got: {prob}")
            if prob > 0:
                cleaned[int(offset)] = cleaned.get(int(offset), 0.0) + float(prob)
        object.__setattr__(self, 'atoms', dict(sorted(cleaned.items())))
        self._validate()

    def _validate(self):
        if not math.isfinite(self.step) or self.step <= 0:
            raise LawValidationError(f"step must be a finite real > 0, got: {self.step}")
        if not self.atoms:
            raise LawValidationError("a lattice law needs at least one atom with positive probability")
        total = math.fsum(self.atoms.values())
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise LawValidationError(f"atom probabilities must sum to 1, got: {total!r}")
        if self.d is not None:
            if not math.isfinite(self.d) or self.d <= 0:
                raise LawValidationError(f"d must be a finite real > 0, got: {self.d}")
            reach = max(abs(k) for k in self.atoms) * self.step
            if reach > self.d * (1.0 + SUPPORT_RTOL):
                raise LawValidationError(f"atoms reach {reach}, beyond the jump bound d={self.d}")

    @classmethod
    def three_point(cls, gamma: float, d: float = 1.0) -> 'LatticeLaw':
        """P(+-d) = gamma/2, P(0) = 1 - gamma: the extremal symmetric law."""
        if not 0.0 < gamma <= 1.0:
            raise LawValidationError(f"gamma must lie in (0, 1], got: {gamma}")
        return cls(d, {-1: gamma / 2.0, 0: 1.0 - gamma, 1: gamma / 2.0}, d)

    @classmethod
    def two_point(cls, gamma: float, d: float = 1.0, max_denominator: int = 1000) -> 'LatticeLaw':
        """
        P(d) = g/(1+g), P(-g d) = 1/(1+g): the extremal law of the classical bound.

        g = p/q is the closest fraction to gamma with q <= max_denominator, so
        that both atoms share the lattice of pitch d/q. A warning is logged when
        g differs from gamma.
        """
        if not 0.0 < gamma <= 1.0:
            raise LawValidationError(f"gamma must lie in (0, 1], got: {gamma}")
        ratio = Fraction(gamma).limit_denominator(max_denominator)
        if float(ratio) != gamma:
            logger.warning(f"two-point law uses gamma={ratio} ({float(ratio)!r}) in place of {gamma!r}")
        p, q = ratio.numerator, ratio.denominator
        g = float(ratio)
        return cls(d / q, {q: g / (1.0 + g), -p: 1.0 / (1.0 + g)}, d)

    @classmethod
    def from_increment_law(cls, law: IncrementLaw, max_denominator: int = 1000) -> 'LatticeLaw':
        """
        Lattice form of a simulator increment law (uncentered values U_k).

        Raises:
            LawValidationError: If the atoms have no common lattice with
                denominators up to max_denominator
        """
        centered, probs = law.support()
        values = [float(a) + law.shift for a in centered]
        fractions = [Fraction(v).limit_denominator(max_denominator) for v in values]
        for value, frac in zip(values, fractions):
            if abs(float(frac) - value) > SUPPORT_RTOL * max(1.0, abs(value)):
                raise LawValidationError(f"atom {value!r} is not on a lattice with denominator <= {max_denominator}")

        common = math.lcm(*(f.denominator for f in fractions))
        numerators = [f.numerator * (common // f.denominator) for f in fractions]
        pitch = math.gcd(*numerators) or 1
        step = Fraction(pitch, common)

        atoms: Dict[int, float] = {}
        for n_k, prob in zip(numerators, probs):
            atoms[n_k // pitch] = atoms.get(n_k // pitch, 0.0) + float(prob)
        bound = None if law.one_sided else law.d + abs(law.shift)
        return cls(float(step), atoms, bound)

    @property
    def offsets(self) -> np.ndarray:
        return np.fromiter(self.atoms.keys(), dtype=np.int64)

    @property
    def probabilities(self) -> np.ndarray:
        return np.fromiter(self.atoms.values(), dtype=float)

    @property
    def min_offset(self) -> int:
        return min(self.atoms)

    @property
    def max_offset(self) -> int:
        return max(self.atoms)

    @property
    def span(self) -> int:
        return self.max_offset - self.min_offset

    @property
    def mean(self) -> float:
        return math.fsum(k * self.step * p for k, p in self.atoms.items())

    @property
    def second_moment(self) -> float:
        return math.fsum((k * self.step) ** 2 * p for k, p in self.atoms.items())

    @property
    def is_symmetric(self) -> bool:
        return all(abs(p - self.atoms.get(-k, 0.0)) <= PROBABILITY_TOLERANCE for k, p in self.atoms.items())

    def expectation(self, h: Callable[[float], float]) -> float:
        """E[h(X)] by exact enumeration of the atoms."""
        return math.fsum(p * h(k * self.step) for k, p in self.atoms.items())


@dataclass(frozen=True)
class LatticeThreshold:
    """A real threshold moved up to the first lattice point at or above it."""
    requested: float
    units: int
    step: float

    @property
    def value(self) -> float:
        return self.units * self.step

    @property
    def rounded(self) -> bool:
        return abs(self.value - self.requested) > LATTICE_SLACK * max(1.0, abs(self.requested))


@dataclass(frozen=True)
class RateEstimate:
    """Exact tails and their empirical rates -(1/n) ln P against a target exponent."""
    n_values: Tuple[int, ...]
    exact_probabilities: Tuple[float, ...]
    log_probabilities: Tuple[float, ...]
    empirical_rates: Tuple[float, ...]
    target: float
    gaps: Tuple[float, ...]
    metadata: Dict[str, str] = field(default_factory=dict, hash=False)

    @property
    def gaps_positive(self) -> bool:
        return all(g > 0 for g in self.gaps)

    @property
    def gaps_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.gaps, self.gaps[1:]))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'n': list(self.n_values),
            'exact_tail': list(self.exact_probabilities),
            'empirical_rate': list(self.empirical_rates),
            'target_exponent': [self.target] * len(self.n_values),
            'gap': list(self.gaps),
        })


@dataclass(frozen=True)
class IdentityCheck:
    """Both sides of a moment identity or inequality, evaluated exactly."""
    lhs: float
    rhs: float
    equal: bool
    dominated: bool


def align_threshold(threshold: float, step: float) -> LatticeThreshold:
    """Round a threshold up to the lattice; the event S >= t is unchanged on the lattice."""
    if not math.isfinite(threshold):
        raise DomainError(f"threshold must be finite, got: {threshold}")
    units = math.ceil(threshold / step - LATTICE_SLACK)
    return LatticeThreshold(threshold, int(units), step)


def _state_steps(law: LatticeLaw, n: int, barrier: Optional[int] = None, two_sided: bool = False) -> int:
    k = np.arange(1, n + 1, dtype=np.int64)
    top = k * law.max_offset
    bottom = k * law.min_offset
    if barrier is not None:
        top = np.minimum(top, barrier - 1)
        if two_sided:
            bottom = np.maximum(bottom, 1 - barrier)
    return int(np.maximum(top - bottom + 1, 0).sum())


def _guard(law: LatticeLaw, n: int, config: OracleConfig, barrier=None, two_sided=False) -> None:
    steps = _state_steps(law, n, barrier, two_sided)
    if steps > config.max_state_steps:
        raise ResourceGuardError(
            f"exact DP over n={n} steps needs {steps} state-steps, above the limit {config.max_state_steps}",
            steps,
            config.max_state_steps,
        )
    logger.debug(f"DP over n={n} steps, {steps} state-steps")


def _convolve(live: np.ndarray, offsets: np.ndarray, probs: np.ndarray, min_offset: int, span: int) -> np.ndarray:
    """One step of the convolution with Neumaier-compensated accumulation."""
    total = np.zeros(live.size + span)
    carry = np.zeros(live.size + span)
    for offset, prob in zip(offsets, probs):
        start = int(offset) - min_offset
        window = slice(start, start + live.size)
        term = prob * live
        current = total[window]
        updated = current + term
        carry[window] += np.where(np.abs(current) >= np.abs(term),
                                  (current - updated) + term,
                                  (term - updated) + current)
        total[window] = updated
    return total + carry


def _propagate(
    law: LatticeLaw,
    n: int,
    config: OracleConfig,
    barrier: Optional[int] = None,
    two_sided: bool = False,
) -> Tuple[int, np.ndarray, float]:
    """
    Run the DP for n steps from S_0 = 0.

    Returns (lowest live offset, live distribution, absorbed mass). With a
    barrier, mass reaching >= barrier (or <= -barrier when two_sided) after any
    step is absorbed.
    """
    offsets, probs = law.offsets, law.probabilities
    min_offset, span = law.min_offset, law.span

    lo = 0
    live = np.ones(1)
    absorbed: List[float] = []
    for k in range(1, n + 1):
        live = _convolve(live, offsets, probs, min_offset, span)
        lo += min_offset

        if barrier is not None:
            cut = max(barrier - lo, 0)
            if cut < live.size:
                absorbed.append(math.fsum(live[cut:].tolist()))
                live = live[:cut]
            if two_sided:
                cut = min(max(1 - barrier - lo, 0), live.size)
                if cut > 0:
                    absorbed.append(math.fsum(live[:cut].tolist()))
                    live = live[cut:]
                    lo += cut

        mass = math.fsum(live.tolist()) + math.fsum(absorbed)
        if abs(mass - 1.0) > config.mass_tolerance:
            raise MassConservationError(f"DP mass drifted to {mass!r} at step {k}")
        if live.size == 0:
            break

    return lo, live, math.fsum(absorbed)


def _check_n(n: int, allow_zero: bool = False) -> None:
    floor = 0 if allow_zero else 1
    if not isinstance(n, (int, np.integer)) or n < floor:
        raise DomainError(f"n must be an integer >= {floor}, got: {n}")


def exact_tail(law: LatticeLaw, n: int, threshold: float, config: Optional[OracleConfig] = None) -> float:
    """
    Exact P(S_n >= threshold) by iterated convolution.

    Raises:
        ResourceGuardError: If the DP would exceed config.max_state_steps
    """
    _check_n(n)
    config = config or OracleConfig()
    t = align_threshold(threshold, law.step)

    if t.units <= n * law.min_offset:
        return 1.0
    if t.units > n * law.max_offset:
        return 0.0

    _guard(law, n, config)
    lo, live, _ = _propagate(law, n, config)
    start = max(t.units - lo, 0)
    return min(1.0, math.fsum(live[start:].tolist()))


def exact_max_tail(
    law: LatticeLaw,
    n: int,
    barrier: float,
    mode: str = 'one_sided',
    config: Optional[OracleConfig] = None,
) -> float:
    """
    Exact P(max_{1<=k<=n} S_k >= barrier) (one_sided) or P(max_k |S_k| >= barrier) (two_sided).

    Raises:
        ResourceGuardError: If the DP would exceed config.max_state_steps
    """
    if mode not in MAX_MODES:
        raise DomainError(f"mode must be one of {MAX_MODES}, got: {mode}")
    _check_n(n, allow_zero=True)
    if n == 0:
        return 0.0
    config = config or OracleConfig()
    b = align_threshold(barrier, law.step).units
    two_sided = mode == 'two_sided'

    reach = n * law.max_offset
    if two_sided:
        reach = max(reach, -n * law.min_offset)
    if b > reach:
        return 0.0

    _guard(law, n, config, b, two_sided)
    _, _, absorbed = _propagate(law, n, config, b, two_sided)
    return min(1.0, absorbed)


def exact_freedman_deterministic_q(
    law: LatticeLaw,
    qstep: float,
    z: float,
    r: float,
    config: Optional[OracleConfig] = None,
) -> float:
    """
    Exact P(max_{k<=n} S_k >= z and Q_n <= r for some n) when Q_k = k * qstep.

    With deterministic quadratic variation the event reduces to a running
    maximum over the N = floor(r / qstep) steps on which Q stays <= r.

    Raises:
        LawValidationError: If qstep is not the law's second moment
    """
    for name, value in (('qstep', qstep), ('z', z), ('r', r)):
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"{name} must be a finite real > 0, got: {value}")
    if abs(qstep - law.second_moment) > QSTEP_TOLERANCE:
        raise LawValidationError(f"qstep {qstep!r} differs from the law's second moment {law.second_moment!r}")

    horizon = math.floor(r / qstep + LATTICE_SLACK)
    logger.info(f"Freedman event with deterministic Q reduces to a running max over {horizon} steps")
    return exact_max_tail(law, horizon, z, 'one_sided', config)


def _tilt(law: LatticeLaw, rate: float) -> float:
    """theta > 0 under which the tilted law has mean `rate` lattice units per step."""
    offsets = law.offsets.astype(float)
    probs = law.probabilities

    def excess(theta: float) -> float:
        weights = np.exp(theta * offsets - logsumexp(theta * offsets, b=probs))
        return float(np.dot(weights * probs, offsets)) - rate

    upper = 1.0
    while excess(upper) <= 0:
        upper *= 2.0
    return brentq(excess, 0.0, upper, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def exact_log_tail(law: LatticeLaw, n: int, threshold: float, config: Optional[OracleConfig] = None) -> float:
    """
    ln P(S_n >= threshold), accurate when the probability underflows a double.

    Under the tilted law q_k = p_k e^{theta k} / M(theta), with the tilt chosen so
    that the tilted mean sits on the threshold,

        P(S_n >= t) = M(theta)^n e^{-theta t} E_q[e^{-theta (S_n - t)}; S_n >= t]

    and the tilted expectation is of order n^{-1/2}, far from underflow.
    """
    _check_n(n)
    config = config or OracleConfig()
    t = align_threshold(threshold, law.step)

    if t.units <= n * law.min_offset:
        return 0.0
    if t.units > n * law.max_offset:
        return -math.inf
    if t.units == n * law.max_offset:
        return n * math.log(law.atoms[law.max_offset])

    mean_units = law.mean / law.step
    if t.units <= n * mean_units:
        return math.log(exact_tail(law, n, threshold, config))

    theta = _tilt(law, t.units / n)
    offsets = law.offsets.astype(float)
    log_m = float(logsumexp(theta * offsets, b=law.probabilities))
    tilted = np.exp(theta * offsets + np.log(law.probabilities) - log_m)
    tilted_law = LatticeLaw(law.step, dict(zip(law.offsets.tolist(), (tilted / math.fsum(tilted)).tolist())))

    _guard(tilted_law, n, config)
    lo, live, _ = _propagate(tilted_law, n, config)
    start = max(t.units - lo, 0)
    states = np.arange(lo + start, lo + live.size)
    weighted = math.fsum((np.exp(-theta * (states - t.units)) * live[start:]).tolist())
    return n * log_m - theta * t.units + math.log(weighted)


def _rate_law(law: str, gamma: float, d: float, config: OracleConfig) -> Tuple[LatticeLaw, Callable, float]:
    if law == 'symmetric':
        return LatticeLaw.three_point(gamma, d), exponent_cs, gamma
    if law == 'mcdiarmid':
        effective = float(Fraction(gamma).limit_denominator(config.lattice_max_denominator))
        return LatticeLaw.two_point(gamma, d, config.lattice_max_denominator), exponent_kl, effective
    raise DomainError(f"law must be one of {LAW_NAMES}, got: {law}")


def rate_convergence(
    gamma: float,
    delta: float,
    n_values: Sequence[int],
    law: str = 'symmetric',
    d: float = 1.0,
    config: Optional[OracleConfig] = None,
) -> RateEstimate:
    """
    Empirical rates -(1/n) ln P(S_n >= delta d n) of an extremal law against its exponent.

    law='symmetric' uses the three-point law and targets E(gamma, delta);
    law='mcdiarmid' uses the two-point law and targets the KL exponent. Gaps
    are empirical_rate - target: positive at every n since the one-sided
    Chernoff bound holds, and shrinking like ln(n)/n. Thresholds off the
    lattice are rounded up and listed in metadata. delta above 1 has an empty
    event and no finite rate, so it is rejected.
    """
    if not n_values:
        raise DomainError("n_values must not be empty")
    for n in n_values:
        _check_n(n)
    if not math.isfinite(delta) or delta > 1.0:
        raise DomainError(f"delta must lie in [0, 1] for rate_convergence, got: {delta}")
    config = config or OracleConfig()
    lattice, exponent, law_gamma = _rate_law(law, gamma, d, config)
    target = exponent(ExponentInput(law_gamma, delta)).value

    probabilities, log_probabilities, rates, rounded = [], [], [], []
    for n in n_values:
        t = align_threshold(delta * d * n, lattice.step)
        if t.rounded:
            logger.warning(f"n={n}: threshold {t.requested!r} rounded up to lattice point {t.value!r}")
            rounded.append(f"{n}:{t.requested!r}->{t.value!r}")

        p = exact_tail(lattice, n, t.value, config)
        log_p = math.log(p) if p >= LOG_SCALE_CUTOFF else exact_log_tail(lattice, n, t.value, config)
        probabilities.append(p)
        log_probabilities.append(log_p)
        rates.append(-log_p / n)
        logger.info(f"n={n}: P={p:.6e}, rate={rates[-1]:.10f}, target={target:.10f}")

    gaps = tuple(rate - target for rate in rates)
    metadata = {
        'law': law,
        'gamma': repr(gamma),
        'law_gamma': repr(law_gamma),
        'delta': repr(delta),
        'lattice_step': repr(lattice.step),
        'threshold_rounding': ';'.join(rounded) if rounded else 'none',
    }
    estimate = RateEstimate(tuple(int(n) for n in n_values), tuple(probabilities), tuple(log_probabilities),
                            tuple(rates), target, gaps, metadata)
    if len(gaps) > 1 and not estimate.gaps_decreasing:
        logger.warning(f"rate gaps are not strictly decreasing: {gaps}")
    return estimate


def _close(lhs: float, rhs: float) -> bool:
    return abs(lhs - rhs) <= EQUALITY_RTOL * max(1.0, abs(rhs))


def refined_bennett_check(
    gamma: float,
    d: float,
    lam: float,
    law: Optional[LatticeLaw] = None,
) -> IdentityCheck:
    """
    E[e^{lam X}] against 1 + gamma (cosh(lam d) - 1).

    Without a law the three-point law P(+-d) = gamma/2 is enumerated and the two
    sides agree for every lam. A symmetric law with |X| <= d and E[X^2] <= gamma d^2
    may be passed instead; it is dominated by the right-hand side.
    """
    if not 0.0 < gamma <= 1.0:
        raise DomainError(f"gamma must lie in (0, 1], got: {gamma}")
    if not math.isfinite(d) or d <= 0:
        raise DomainError(f"d must be a finite real > 0, got: {d}")

    if law is None:
        law = LatticeLaw.three_point(gamma, d)
    elif not law.is_symmetric:
        raise LawValidationError("refined_bennett_check needs a symmetric law")
    elif law.second_moment > gamma * d * d * (1.0 + SUPPORT_RTOL):
        raise LawValidationError(f"law variance {law.second_moment!r} exceeds gamma d^2 = {gamma * d * d!r}")

    lhs = law.expectation(lambda x: math.exp(lam * x))
    rhs = 1.0 + gamma * float(cosh_minus_one(lam * d))
    return IdentityCheck(lhs, rhs, _close(lhs, rhs), lhs <= rhs * (1.0 + EQUALITY_RTOL))


def bennett_check(gamma: float, d: float, lam: float, max_denominator: int = 1000) -> IdentityCheck:
    """E[e^{lam X}] for the two-point law against Bennett's (gamma e^{lam d} + e^{-gamma lam d}) / (1 + gamma)."""
    if not math.isfinite(lam) or lam < 0:
        raise DomainError(f"lam must be a finite real >= 0, got: {lam}")
    law = LatticeLaw.two_point(gamma, d, max_denominator)
    g = law.second_moment / d ** 2
    lhs = law.expectation(lambda x: math.exp(lam * x))
    rhs = mgf_bound(g, lam * d, symmetric=False)
    return IdentityCheck(lhs, rhs, _close(lhs, rhs), lhs <= rhs * (1.0 + EQUALITY_RTOL))


def convex_moment_check(law: LatticeLaw, h: Callable[[float], float], d: float) -> IdentityCheck:
    """
    E[h(X^2)] against (1 - gamma) h(0) + gamma h(d^2), gamma = E[X^2] / d^2.

    For convex h and |X| <= d the left side never exceeds the right; the
    three-point law with the same gamma attains equality.
    """
    if not math.isfinite(d) or d <= 0:
        raise DomainError(f"d must be a finite real > 0, got: {d}")
    if max(abs(k) for k in law.atoms) * law.step > d * (1.0 + SUPPORT_RTOL):
        raise LawValidationError(f"law support exceeds d={d}")
    gamma = law.second_moment / d ** 2
    lhs = law.expectation(lambda x: h(x * x))
    rhs = (1.0 - gamma) * h(0.0) + gamma * h(d * d)
    return IdentityCheck(lhs, rhs, _close(lhs, rhs), lhs <= rhs + EQUALITY_RTOL * max(1.0, abs(rhs)))


def certificate_check(
    lam: float,
    theta: float,
    a_grid: Iterable[float],
    variant: str = 'tightened',
) -> bool:
    """
    True iff (1 + a c(lam)) e^{-theta a} <= 1 at every grid point a >= 0.

    c(lam) = cosh(lam) - 1 for the tightened (conditionally symmetric)
    supermartingale and e^lam - 1 - lam for the classical one. Evaluated in log
    form, ln(1 + a c) <= theta a. The inequality holds for all a >= 0 exactly
    when theta >= c(lam); witnesses of failure just below that threshold sit at
    small a, so the grid should reach down to about 1e-6.
    """
    if variant not in CERTIFICATE_VARIANTS:
        raise DomainError(f"variant must be one of {CERTIFICATE_VARIANTS}, got: {variant}")
    grid = np.asarray(list(a_grid), dtype=float)
    if grid.size and (not np.all(np.isfinite(grid)) or grid.min() < 0):
        raise DomainError("a_grid entries must be finite reals >= 0")

    c = float(cosh_minus_one(lam)) if variant == 'tightened' else math.expm1(lam) - lam
    lhs = np.log1p(grid * c)
    rhs = theta * grid
    violations = lhs > rhs + CERTIFICATE_SLACK * np.maximum(1.0, np.abs(rhs))
    if np.any(violations):
        logger.debug(f"certificate fails at a={grid[np.argmax(violations)]!r} for lam={lam}, theta={theta}")
        return False
    return True


def theta_min(lam: float, variant: str = 'tightened') -> float:
    """Smallest theta for which the certificate holds at every a >= 0."""
    if variant == 'tightened':
        return float(cosh_minus_one(lam))
    if variant == 'classical':
        return math.expm1(lam) - lam
    raise DomainError(f"variant must be one of {CERTIFICATE_VARIANTS}, got: {variant}")

