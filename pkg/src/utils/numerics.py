"""
Numerically stable primitives shared by the exponent and bound modules.

All functions accept scalars or numpy arrays and return the same shape.
"""

import numpy as np

LN2 = float(np.log(2.0))


def cosh_minus_one(x):
    """cosh(x) - 1 evaluated as 2 sinh^2(x/2), accurate near zero."""
    half = np.sinh(np.asarray(x, dtype=float) / 2.0)
    return 2.0 * half * half


def log1p_cosh_term(gamma, x):
    """ln(1 + gamma (cosh(x) - 1)) without cancellation for small x."""
    return np.log1p(gamma * cosh_minus_one(x))


def sqrt1p_minus_one(y):
    """sqrt(1 + y) - 1 computed as y / (sqrt(1 + y) + 1)."""
    y = np.asarray(y, dtype=float)
    return y / (np.sqrt(1.0 + y) + 1.0)

