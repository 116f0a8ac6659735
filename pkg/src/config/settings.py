"""
Configuration Management Component

This module holds the run-time settings of the toolkit: Monte Carlo sizing and
seeding, the resource limits of the exact dynamic programs, and application
level options such as the log level. Every section validates itself on
construction and raises ConfigurationError with a message naming the
offending value.

Settings are assembled from command-line flags; no environment variables are
consulted, so a run is fully described by its flags.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict

from ..errors import BoundsError

logger = logging.getLogger(__name__)

VALID_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


class ConfigurationError(BoundsError, ValueError):
    """Custom exception for configuration-related errors."""
    pass


@dataclass
class SimulationConfig:
    """Configuration for Monte Carlo estimation."""
    trials: int = 100_000
    seed: int = 0
    workers: int = 1
    block_size: int = 4096

    def __post_init__(self):
        """Validate simulation configuration after initialization."""
        self._validate()

    def _validate(self):
        """Validate all simulation configuration values."""
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigurationError(f"trials must be a positive integer, got: {self.trials}")

        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"seed must be an integer in [0, 2**64), got: {self.seed}")

        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigurationError(f"workers must be a positive integer, got: {self.workers}")

        if not isinstance(self.block_size, int) or self.block_size < 1:
            raise ConfigurationError(f"block_size must be a positive integer, got: {self.block_size}")


@dataclass
class OracleConfig:
    """Configuration for the exact lattice dynamic programs."""
    max_state_steps: int = 10_000_000
    mass_tolerance: float = 1e-10
    lattice_max_denominator: int = 1000

    def __post_init__(self):
        """Validate oracle configuration after initialization."""
        self._validate()

    def _validate(self):
        """Validate all oracle configuration values."""
        if not isinstance(self.max_state_steps, int) or self.max_state_steps < 1:
            raise ConfigurationError(
                f"max_state_steps must be a positive integer, got: {self.max_state_steps}"
            )

        if not 0 < self.mass_tolerance < 1:
            raise ConfigurationError(f"mass_tolerance must lie in (0, 1), got: {self.mass_tolerance}")

        if not isinstance(self.lattice_max_denominator, int) or self.lattice_max_denominator < 1:
            raise ConfigurationError(
                f"lattice_max_denominator must be a positive integer, got: {self.lattice_max_denominator}"
            )


@dataclass
class AppConfig:
    """General application configuration."""
    name: str = "symmetric-martingale-bounds"
    log_level: str = "WARNING"

    def __post_init__(self):
        """Validate application configuration after initialization."""
        self.log_level = self.log_level.upper()
        self._validate()

    def _validate(self):
        """Validate application configuration values."""
        if not self.name:
            raise ConfigurationError("Application name is required")

        if self.log_level not in VALID_LOG_LEVELS:
            raise ConfigurationError(f"Log level must be one of: {list(VALID_LOG_LEVELS)}")


@dataclass
class Settings:
    """
    Aggregate of all configuration sections.

    Sections default to their documented values; use from_overrides() to build
    a validated instance from flag values.
    """
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    app: AppConfig = field(default_factory=AppConfig)

    @classmethod
    def from_overrides(cls, **overrides: Any) -> 'Settings':
        """
        Build settings from flat keyword overrides.

        Keys are matched against the fields of every section; None values are
        ignored so that unset command-line flags keep their defaults.

        Raises:
            ConfigurationError: If a key is unknown or a value fails validation
        """
        sections = {'simulation': SimulationConfig, 'oracle': OracleConfig, 'app': AppConfig}
        per_section: Dict[str, Dict[str, Any]] = {name: {} for name in sections}

        for key, value in overrides.items():
            if value is None:
                continue
            owner = next(
                (name for name, klass in sections.items() if key in klass.__dataclass_fields__),
                None,
            )
            if owner is None:
                raise ConfigurationError(f"Unknown configuration key '{key}'")
            per_section[owner][key] = value

        settings = cls(**{name: klass(**per_section[name]) for name, klass in sections.items()})
        logger.debug(f"Settings built: {settings.get_summary()}")
        return settings

    def validate_all(self) -> Dict[str, bool]:
        """
        Validate all configuration components.

        Returns:
            Dictionary with validation results for each component
        """
        results = {}
        for name in ('simulation', 'oracle', 'app'):
            try:
                getattr(self, name)._validate()
                results[name] = True
            except ConfigurationError as e:
                results[name] = False
                logger.error(f"{name} configuration invalid: {e}")
        return results

    def get_summary(self) -> Dict[str, Any]:
        """Get a plain-dict summary of the current configuration."""
        return {
            'simulation': asdict(self.simulation),
            'oracle': asdict(self.oracle),
            'app': asdict(self.app),
        }
