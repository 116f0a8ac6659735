"""
Core functionality: exponents, the higher-moment bound, simulation and exact oracles.
"""

from .exact_oracle import (
    LatticeLaw,
    RateEstimate,
    certificate_check,
    exact_freedman_deterministic_q,
    exact_log_tail,
    exact_max_tail,
    exact_tail,
    rate_convergence,
    refined_bennett_check,
)
from .exponents import (
    ExponentInput,
    FreedmanInput,
    exponent_cs,
    exponent_kl,
    freedman_B,
    freedman_C,
    freedman_bound,
    tail_bound_t1,
    tail_bound_t2,
)
from .generalized_bound import MomentProfile, minimize_convex_univariate, tail_bound_t3
from .simulator import IncrementLaw, MartingaleSpec, WeightRule, estimate_freedman_event, estimate_tail, sample_path

__all__ = [
    'ExponentInput', 'FreedmanInput', 'exponent_cs', 'exponent_kl', 'freedman_B', 'freedman_C',
    'freedman_bound', 'tail_bound_t1', 'tail_bound_t2',
    'MomentProfile', 'minimize_convex_univariate', 'tail_bound_t3',
    'IncrementLaw', 'MartingaleSpec', 'WeightRule', 'estimate_freedman_event', 'estimate_tail', 'sample_path',
    'LatticeLaw', 'RateEstimate', 'certificate_check', 'exact_freedman_deterministic_q', 'exact_log_tail',
    'exact_max_tail', 'exact_tail', 'rate_convergence', 'refined_bennett_check',
]
