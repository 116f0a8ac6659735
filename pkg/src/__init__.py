"""
Symmetric Martingale Bounds
Tightened exponential tail bounds for conditionally symmetric martingales,
with Monte Carlo and exact lattice checks.
"""

__version__ = "1.0.0"
__description__ = "Exponential tail bounds for conditionally symmetric martingales"
