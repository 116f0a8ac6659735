"""Wilson score interval for binomial proportions of rare tail events."""

from math import sqrt
from typing import Tuple

from scipy.stats import norm


def wilson_interval(hits: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """
    Calculate the Wilson score confidence interval for a binomial proportion.

    Unlike the Wald interval, the Wilson interval stays non-degenerate at
    p_hat = 0 and never leaves [0, 1], which matters for deep-tail events.

    Args:
        hits: Number of trials in which the event occurred
        trials: Total number of trials
        confidence: Two-sided confidence level

    Returns:
        Tuple of (lower, upper) bounds, both within [0, 1]

    Examples:
        >>> wilson_interval(0, 10)
        (0.0, 0.2775...)
    """
    if trials <= 0:
        raise ValueError(f"trials must be positive, got: {trials}")
    if not 0 <= hits <= trials:
        raise ValueError(f"hits must lie in [0, trials], got: {hits}")

    z = float(norm.ppf(0.5 + confidence / 2.0))
    p_hat = hits / trials
    z2 = z * z

    denominator = 1.0 + z2 / trials
    center = (p_hat + z2 / (2.0 * trials)) / denominator
    margin = (z / denominator) * sqrt(p_hat * (1.0 - p_hat) / trials + z2 / (4.0 * trials * trials))

    lower = max(0.0, center - margin)
    upper = min(1.0, center + margin)

    # keep ci_low <= p_hat <= ci_high exactly at the boundaries
    return min(lower, p_hat), max(upper, p_hat)

