"""
Configuration module for the martingale bounds toolkit.
"""

from .settings import AppConfig, ConfigurationError, OracleConfig, Settings, SimulationConfig

__all__ = ['AppConfig', 'ConfigurationError', 'OracleConfig', 'Settings', 'SimulationConfig']
