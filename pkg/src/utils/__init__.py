"""
Utility modules: numerics, interval estimates and report writers.
"""

from .reporting import BoundReport, TailEstimate, frame_to_csv
from .statistics import wilson_interval

__all__ = ['BoundReport', 'TailEstimate', 'frame_to_csv', 'wilson_interval']
