"""
Report records and table writers.

TailEstimate and BoundReport are pydantic models so that a report written as
JSON parses back into an equal record. Comparison tables are pandas DataFrames
written as RFC-4180 CSV with LF line endings and 17 significant digits.
"""

import io
import math
from typing import Any, Dict, Literal, Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

CSV_FLOAT_FORMAT = "%.17g"
BOUND_SLACK = 1e-12

Theorem = Literal["T1", "T2", "T3", "T4", "T5"]
Scalar = Union[int, float, str, bool, None]


def _encode_float(value: Optional[float]) -> Union[float, str, None]:
    if value is not None and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _decode_float(value: Any) -> Any:
    if isinstance(value, str) and value.lower() in ("inf", "+inf", "-inf"):
        return -math.inf if value.startswith("-") else math.inf
    return value


class TailEstimate(BaseModel):
    """Monte Carlo estimate of one tail event with a 95% Wilson interval."""
    model_config = ConfigDict(frozen=True)

    hits: int
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float
    seed: int
    event_descriptor: str
    truncated: int = 0

    @model_validator(mode="after")
    def _check_consistency(self) -> "TailEstimate":
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        if not 0 <= self.hits <= self.trials:
            raise ValueError("hits must lie in [0, trials]")
        if not self.ci_low <= self.p_hat <= self.ci_high:
            raise ValueError("expected ci_low <= p_hat <= ci_high")
        return self

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2.0

    @property
    def truncation_rate(self) -> float:
        return self.truncated / self.trials


class BoundReport(BaseModel):
    """One comparison row: a theorem's bound next to exact and simulated probabilities."""
    model_config = ConfigDict(frozen=True)

    theorem: Theorem
    inputs: Dict[str, Scalar]
    exponent: Optional[float] = None
    bound_raw: float
    bound_clamped: float
    exact: Optional[float] = None
    mc_estimate: Optional[TailEstimate] = None
    metadata: Dict[str, str] = {}

    @field_validator("exponent", mode="before")
    @classmethod
    def _parse_exponent(cls, value: Any) -> Any:
        return _decode_float(value)

    @field_serializer("exponent")
    def _serialize_exponent(self, value: Optional[float]) -> Union[float, str, None]:
        return _encode_float(value)

    @model_validator(mode="after")
    def _check_bounds(self) -> "BoundReport":
        if self.bound_clamped != min(1.0, self.bound_raw):
            raise ValueError("bound_clamped must equal min(1, bound_raw)")
        if self.exact is not None and self.exact > self.bound_raw + BOUND_SLACK:
            raise ValueError(f"exact probability {self.exact} exceeds bound {self.bound_raw}")
        return self

    @classmethod
    def from_raw(cls, theorem: str, inputs: Dict[str, Scalar], bound_raw: float, **extra: Any) -> "BoundReport":
        """Build a report, deriving the clamped bound from the raw one."""
        return cls(theorem=theorem, inputs=inputs, bound_raw=bound_raw,
                   bound_clamped=min(1.0, bound_raw), **extra)

    def to_json(self) -> str:
        return self.model_dump_json()

    def to_frame(self) -> pd.DataFrame:
        """Flatten the report into a one-row table for CSV output."""
        row: Dict[str, Any] = {"theorem": self.theorem}
        row.update({f"input_{k}": v for k, v in self.inputs.items()})
        row.update({
            "exponent": self.exponent,
            "bound_raw": self.bound_raw,
            "bound_clamped": self.bound_clamped,
            "exact": self.exact,
        })
        if self.mc_estimate is not None:
            row.update({f"mc_{k}": v for k, v in self.mc_estimate.model_dump().items()})
        row.update({f"meta_{k}": v for k, v in self.metadata.items()})
        return pd.DataFrame([row])


def frame_to_csv(df: pd.DataFrame) -> str:
    """Render a table as CSV text with the frozen formatting rules."""
    buffer = io.StringIO()
    df.to_csv(buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()

