"""
Monte Carlo simulation of conditionally symmetric (sub/super)martingales.

Paths follow the weighted-sum construction X_n = sum_k A_k U_k with i.i.d.
increments U_k and predictable weights A_k. Symmetric U_k with a zero mean give
a conditionally symmetric martingale, a negative mean shift with A_k >= 0 gives
a supermartingale, a positive shift a submartingale. The two-point McDiarmid
law is simulated too; it is a martingale but not conditionally symmetric
unless gamma = 1.

Reproducibility: trials are cut into fixed blocks of paths and block b draws
from Philox(SeedSequence(seed, spawn_key=(b,))). Hit counts are integers summed
over blocks, so estimates are bit-identical for any number of workers.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import SimulationConfig
from ..errors import DomainError, LawValidationError
from ..utils.reporting import TailEstimate
from ..utils.statistics import wilson_interval

logger = logging.getLogger(__name__)

LAW_KINDS = ('three_point_symmetric', 'two_point_mcdiarmid', 'shifted_three_point', 'custom_discrete')
WEIGHT_KINDS = ('constant_one', 'deterministic_sequence', 'previous_sign_dependent')
SIDES = ('two_sided_max', 'one_sided_max', 'one_sided_min')

WEIGHT_SUM_TOLERANCE = 1e-12
# relative slack on event thresholds so that alpha * n = 3.0000000000000004 still counts S = 3
EVENT_RTOL = 1e-9


@dataclass(frozen=True)
class IncrementLaw:
    """
    Law of the i.i.d. increments U_k.

    The law is stored through its centered atoms (U_k - shift); shift is the
    mean of U_k. For custom_discrete laws, atoms and weights are given
    explicitly; one_sided=True only requires atoms <= d instead of |atom| <= d.
    """
    kind: str
    d: float
    gamma: Optional[float] = None
    shift: float = 0.0
    atoms: Tuple[float, ...] = ()
    weights: Tuple[float, ...] = ()
    one_sided: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'atoms', tuple(float(a) for a in self.atoms))
        object.__setattr__(self, 'weights', tuple(float(w) for w in self.weights))
        self._validate()

    def _validate(self):
        if self.kind not in LAW_KINDS:
            raise LawValidationError(f"law kind must be one of {LAW_KINDS}, got: {self.kind}")
        if not math.isfinite(self.d) or self.d <= 0:
            raise LawValidationError(f"d must be a finite real > 0, got: {self.d}")
        if not math.isfinite(self.shift):
            raise LawValidationError(f"shift must be finite, got: {self.shift}")

        if self.kind == 'custom_discrete':
            if not self.atoms or len(self.atoms) != len(self.weights):
                raise LawValidationError("custom_discrete needs matching, non-empty atoms and weights")
            if any(w < 0 for w in self.weights):
                raise LawValidationError("custom_discrete weights must be non-negative")
            if abs(math.fsum(self.weights) - 1.0) > WEIGHT_SUM_TOLERANCE:
                raise LawValidationError(f"custom_discrete weights must sum to 1, got: {math.fsum(self.weights)}")
            limit_ok = (max(self.atoms) <= self.d if self.one_sided
                        else max(abs(a) for a in self.atoms) <= self.d)
            if not limit_ok:
                raise LawValidationError(f"custom_discrete atoms exceed the jump bound d={self.d}")
            return

        if self.gamma is None or not 0.0 < self.gamma <= 1.0:
            raise LawValidationError(f"gamma must lie in (0, 1] for {self.kind}, got: {self.gamma}")
        if self.kind != 'shifted_three_point' and self.shift != 0.0:
            raise LawValidationError(f"{self.kind} does not take a shift; use shifted_three_point")

    @classmethod
    def three_point(cls, gamma: float, d: float = 1.0) -> 'IncrementLaw':
        return cls('three_point_symmetric', d, gamma)

    @classmethod
    def mcdiarmid(cls, gamma: float, d: float = 1.0) -> 'IncrementLaw':
        return cls('two_point_mcdiarmid', d, gamma)

    @classmethod
    def shifted(cls, gamma: float, shift: float, d: float = 1.0) -> 'IncrementLaw':
        return cls('shifted_three_point', d, gamma, shift)

    def support(self) -> Tuple[np.ndarray, np.ndarray]:
        """Centered atoms and their probabilities."""
        if self.kind == 'custom_discrete':
            return np.array(self.atoms), np.array(self.weights)
        if self.kind == 'two_point_mcdiarmid':
            g = self.gamma
            return np.array([self.d, -g * self.d]), np.array([g / (1.0 + g), 1.0 / (1.0 + g)])
        g = self.gamma
        return np.array([-self.d, 0.0, self.d]), np.array([g / 2.0, 1.0 - g, g / 2.0])

    @property
    def variance(self) -> float:
        """Second moment of the centered increment."""
        atoms, probs = self.support()
        return math.fsum(probs * atoms * atoms)

    @property
    def is_symmetric(self) -> bool:
        """True when the centered law is symmetric around zero."""
        atoms, probs = self.support()
        mass: Dict[float, float] = {}
        for a, p in zip(atoms, probs):
            if p > 0:
                mass[float(a)] = mass.get(float(a), 0.0) + float(p)
        return all(abs(p - mass.get(-a, 0.0)) <= WEIGHT_SUM_TOLERANCE for a, p in mass.items())


@dataclass(frozen=True)
class WeightRule:
    """
    Predictable weights A_k.

    constant_one: A_k = 1.
    deterministic_sequence: A_k = sequence[(k - 1) % len(sequence)].
    previous_sign_dependent: A_1 = high, A_k = high if xi_{k-1} > 0 else low.
    """
    kind: str = 'constant_one'
    sequence: Tuple[float, ...] = ()
    high: float = 1.0
    low: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, 'sequence', tuple(float(a) for a in self.sequence))
        if self.kind not in WEIGHT_KINDS:
            raise LawValidationError(f"weight rule must be one of {WEIGHT_KINDS}, got: {self.kind}")
        if self.kind == 'deterministic_sequence' and not self.sequence:
            raise LawValidationError("deterministic_sequence needs a non-empty sequence")
        values = self.sequence + (self.high, self.low)
        if any(not math.isfinite(a) for a in values):
            raise LawValidationError("weights must be finite")

    @property
    def bound(self) -> float:
        """Declared bound on |A_k|."""
        if self.kind == 'constant_one':
            return 1.0
        if self.kind == 'deterministic_sequence':
            return max(abs(a) for a in self.sequence)
        return max(abs(self.high), abs(self.low))

    @property
    def nonnegative(self) -> bool:
        if self.kind == 'constant_one':
            return True
        if self.kind == 'deterministic_sequence':
            return min(self.sequence) >= 0
        return min(self.high, self.low) >= 0

    def matrix(self, u: np.ndarray) -> np.ndarray:
        """Weights for a (paths, n) matrix of increments; column k only reads columns < k."""
        paths, n = u.shape
        if self.kind == 'constant_one':
            return np.ones_like(u)
        if self.kind == 'deterministic_sequence':
            seq = np.array(self.sequence)
            return np.broadcast_to(seq[np.arange(n) % len(seq)], (paths, n)).copy()

        a = np.empty_like(u)
        a[:, 0] = self.high
        for k in range(1, n):
            a[:, k] = np.where(a[:, k - 1] * u[:, k - 1] > 0, self.high, self.low)
        return a


@dataclass(frozen=True)
class MartingaleSpec:
    """Increment law, weight rule and horizon of one construction."""
    law: IncrementLaw
    weights: WeightRule
    horizon: int

    def __post_init__(self):
        if not isinstance(self.horizon, (int, np.integer)) or self.horizon < 1:
            raise LawValidationError(f"horizon must be a positive integer, got: {self.horizon}")
        if self.law.shift != 0.0 and not self.weights.nonnegative:
            raise LawValidationError("sub/supermartingale constructions need non-negative weights")

    @property
    def jump_bound(self) -> float:
        """Bound on |A_k (U_k - shift)|."""
        atoms, _ = self.law.support()
        return self.weights.bound * float(np.max(np.abs(atoms)))

    def describe(self) -> str:
        return (f"{self.law.kind}(d={self.law.d}, gamma={self.law.gamma}, shift={self.law.shift}) "
                f"x {self.weights.kind}, n={self.horizon}")


@dataclass(frozen=True)
class PathStats:
    """Summary of one simulated path S_k = X_k - X_0."""
    final_sum: float
    running_max: float
    running_max_abs: float
    running_min: float
    qvar_trace: Tuple[float, ...]


@dataclass(frozen=True)
class _Block:
    """Arrays for a block of paths, each of shape (paths, horizon)."""
    partial_sums: np.ndarray
    qvar: np.ndarray
    centered: np.ndarray
    increments: np.ndarray


def block_stream(seed: int, block_index: int) -> np.random.Generator:
    """Counter-based stream for one block, derived from the master seed and block index."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block_index,))))


def _simulate_block(spec: MartingaleSpec, rng: np.random.Generator, count: int) -> _Block:
    atoms, probs = spec.law.support()
    cumulative = np.cumsum(probs)
    cumulative[-1] = 1.0
    index = np.searchsorted(cumulative, rng.random((count, spec.horizon)), side='right')

    centered_u = atoms[index]
    u = centered_u + spec.law.shift
    a = spec.weights.matrix(u)

    increments = a * u
    return _Block(
        partial_sums=np.cumsum(increments, axis=1),
        qvar=np.cumsum(a * a, axis=1) * spec.law.variance,
        centered=a * centered_u,
        increments=increments,
    )


def sample_path(spec: MartingaleSpec, stream: np.random.Generator) -> PathStats:
    """Draw one path from the given stream and summarize it."""
    block = _simulate_block(spec, stream, 1)
    s = block.partial_sums[0]
    return PathStats(
        final_sum=float(s[-1]),
        running_max=float(s.max()),
        running_max_abs=float(np.abs(s).max()),
        running_min=float(s.min()),
        qvar_trace=tuple(float(q) for q in block.qvar[0]),
    )


def _slack(threshold: float) -> float:
    return EVENT_RTOL * max(1.0, abs(threshold))


def _tail_hits(block: _Block, threshold: float, side: str) -> int:
    s = block.partial_sums
    cut = threshold - _slack(threshold)
    if side == 'two_sided_max':
        hit = np.abs(s).max(axis=1) >= cut
    elif side == 'one_sided_max':
        hit = s.max(axis=1) >= cut
    else:
        hit = s.min(axis=1) <= -cut
    return int(np.count_nonzero(hit))


def _freedman_hits(block: _Block, z: float, r: float) -> Tuple[int, int]:
    reach = block.partial_sums >= z - _slack(z)
    within = block.qvar <= r + _slack(r)
    hit = np.any(reach & within, axis=1)
    truncated = ~hit & within[:, -1]
    return int(np.count_nonzero(hit)), int(np.count_nonzero(truncated))


def _run_block(task: Tuple) -> Tuple[int, int]:
    spec, event, params, seed, block_index, count = task
    block = _simulate_block(spec, block_stream(seed, block_index), count)
    if event == 'tail':
        return _tail_hits(block, *params), 0
    return _freedman_hits(block, *params)


def _block_tasks(spec, event, params, trials: int, seed: int, block_size: int) -> List[Tuple]:
    tasks = []
    for block_index, start in enumerate(range(0, trials, block_size)):
        tasks.append((spec, event, params, seed, block_index, min(block_size, trials - start)))
    return tasks


def _count(tasks: List[Tuple], workers: int) -> Tuple[int, int]:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_run_block, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_run_block(task) for task in tasks]
    return sum(r[0] for r in results), sum(r[1] for r in results)


def _estimate(hits: int, trials: int, seed: int, descriptor: str, truncated: int = 0) -> TailEstimate:
    ci_low, ci_high = wilson_interval(hits, trials)
    return TailEstimate(hits=hits, trials=trials, p_hat=hits / trials, ci_low=ci_low, ci_high=ci_high,
                        seed=seed, event_descriptor=descriptor, truncated=truncated)


def estimate_tail(
    spec: MartingaleSpec,
    alpha: float,
    side: str,
    trials: int,
    seed: int,
    config: Optional[SimulationConfig] = None,
) -> TailEstimate:
    """
    Estimate P(event) for the maximal deviation events of the tail theorems.

    side='two_sided_max':  max_k |S_k| >= alpha n
    side='one_sided_max':  max_k S_k   >= alpha n
    side='one_sided_min':  min_k S_k   <= -alpha n
    """
    if side not in SIDES:
        raise DomainError(f"side must be one of {SIDES}, got: {side}")
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"alpha must be a finite real >= 0, got: {alpha}")
    config = config or SimulationConfig(trials=trials, seed=seed)

    threshold = alpha * spec.horizon
    descriptor = f"{side} threshold={threshold!r} {spec.describe()}"
    logger.info(f"Estimating {descriptor} with {trials} trials, seed {seed}, {config.workers} worker(s)")

    tasks = _block_tasks(spec, 'tail', (threshold, side), trials, seed, config.block_size)
    hits, _ = _count(tasks, config.workers)
    return _estimate(hits, trials, seed, descriptor)


def estimate_freedman_event(
    spec: MartingaleSpec,
    z: float,
    r: float,
    max_horizon: int,
    trials: int,
    seed: int,
    config: Optional[SimulationConfig] = None,
) -> TailEstimate:
    """
    Estimate P(max_{k<=n} S_k >= z and Q_n <= r for some n).

    A path hits iff it reaches z at a step where its quadratic variation is
    still <= r. Paths that neither hit nor push Q above r by max_horizon are
    counted as truncated; a non-zero truncated count flags an unreliable estimate.
    """
    for name, value in (('z', z), ('r', r)):
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"{name} must be a finite real > 0, got: {value}")
    config = config or SimulationConfig(trials=trials, seed=seed)

    run_spec = MartingaleSpec(spec.law, spec.weights, max_horizon)
    descriptor = f"freedman z={z!r} r={r!r} {run_spec.describe()}"
    logger.info(f"Estimating {descriptor} with {trials} trials, seed {seed}")

    tasks = _block_tasks(run_spec, 'freedman', (z, r), trials, seed, config.block_size)
    hits, truncated = _count(tasks, config.workers)
    if truncated:
        logger.warning(f"{truncated} of {trials} paths truncated at horizon {max_horizon} with Q <= r")
    return _estimate(hits, trials, seed, descriptor, truncated)


def conditional_symmetry_check(
    spec: MartingaleSpec,
    trials: int,
    seed: int,
    block_size: int = 4096,
) -> Dict[str, Tuple[float, float, int]]:
    """
    Empirical mean of the centered increments eta_k, bucketed by the realized past.

    Buckets: 'first' (k = 1) and the sign of the previous increment
    ('prev_pos', 'prev_zero', 'prev_neg'). Returns bucket -> (mean, standard error, count).
    """
    sums: Dict[str, List[np.ndarray]] = {'first': [], 'prev_pos': [], 'prev_zero': [], 'prev_neg': []}
    for task in _block_tasks(spec, 'tail', (0.0, 'one_sided_max'), trials, seed, block_size):
        _, _, _, task_seed, block_index, count = task
        block = _simulate_block(spec, block_stream(task_seed, block_index), count)
        eta, xi = block.centered, block.increments
        sums['first'].append(eta[:, 0])
        if spec.horizon > 1:
            prev, current = xi[:, :-1], eta[:, 1:]
            sums['prev_pos'].append(current[prev > 0])
            sums['prev_zero'].append(current[prev == 0])
            sums['prev_neg'].append(current[prev < 0])

    summary = {}
    for bucket, chunks in sums.items():
        values = np.concatenate(chunks) if chunks else np.empty(0)
        if values.size < 2:
            continue
        summary[bucket] = (float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size)),
                           int(values.size))
    return summary

