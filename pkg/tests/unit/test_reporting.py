"""
Unit tests for report records and CSV rendering.
"""

import json
import math

import pandas as pd
import pytest
from pydantic import ValidationError

from src.utils.reporting import BoundReport, TailEstimate, frame_to_csv


@pytest.fixture
def estimate():
    """A small tail estimate."""
    return TailEstimate(hits=3, trials=100, p_hat=0.03, ci_low=0.0103, ci_high=0.0845,
                        seed=1, event_descriptor="max|S_k|>=5")


class TestTailEstimate:
    """Test the Monte Carlo estimate record."""

    def test_derived_values(self, estimate):
        """Test half width and truncation rate."""
        assert estimate.half_width == pytest.approx((0.0845 - 0.0103) / 2)
        assert estimate.truncation_rate == 0.0

    def test_interval_must_contain_estimate(self):
        """Test ci_low <= p_hat <= ci_high is enforced."""
        with pytest.raises(ValidationError):
            TailEstimate(hits=3, trials=100, p_hat=0.03, ci_low=0.05, ci_high=0.1,
                         seed=1, event_descriptor="x")

    def test_hits_within_trials(self):
        """Test hits may not exceed trials."""
        with pytest.raises(ValidationError):
            TailEstimate(hits=101, trials=100, p_hat=1.0, ci_low=0.9, ci_high=1.0,
                         seed=1, event_descriptor="x")

    def test_frozen(self, estimate):
        """Test estimates are immutable."""
        with pytest.raises(ValidationError):
            estimate.hits = 4


class TestBoundReport:
    """Test the comparison report record."""

    def test_clamping(self):
        """Test the clamped bound is derived from the raw one."""
        report = BoundReport.from_raw("T1", {"gamma": 0.5, "delta": 0.1, "n": 2}, 1.7, exponent=0.01)
        assert report.bound_clamped == 1.0
        assert report.bound_raw == 1.7

    def test_inconsistent_clamp_rejected(self):
        """Test bound_clamped must equal min(1, bound_raw)."""
        with pytest.raises(ValidationError):
            BoundReport(theorem="T1", inputs={}, bound_raw=0.5, bound_clamped=0.4)

    def test_exact_above_bound_rejected(self):
        """Test an exact probability above the bound is rejected."""
        with pytest.raises(ValidationError):
            BoundReport.from_raw("T1", {}, 0.1, exact=0.2)

    def test_unknown_theorem(self):
        """Test the theorem tag is checked."""
        with pytest.raises(ValidationError):
            BoundReport.from_raw("T9", {}, 0.1)

    def test_json_round_trip(self, estimate):
        """Test a report parses back into an equal record."""
        report = BoundReport.from_raw("T1", {"gamma": 0.5, "delta": 0.5, "n": 10}, 0.146154128673,
                                      exponent=0.2616240719, exact=0.01, mc_estimate=estimate,
                                      metadata={"seed": "1"})
        assert BoundReport.model_validate_json(report.to_json()) == report

    def test_infinite_exponent(self):
        """Test an infinite exponent is written as the string inf and read back."""
        report = BoundReport.from_raw("T1", {"delta": 1.5}, 0.0, exponent=math.inf)
        payload = json.loads(report.to_json())
        assert payload["exponent"] == "inf"
        assert BoundReport.model_validate_json(report.to_json()).exponent == math.inf

    def test_to_frame(self, estimate):
        """Test flattening into one CSV row."""
        report = BoundReport.from_raw("T4", {"z": 5.0, "r": 5.0}, 0.0967, mc_estimate=estimate,
                                      metadata={"seed": "1"})
        frame = report.to_frame()
        assert len(frame) == 1
        assert list(frame.columns[:3]) == ["theorem", "input_z", "input_r"]
        assert frame.loc[0, "mc_hits"] == 3
        assert frame.loc[0, "meta_seed"] == "1"


class TestFrameToCsv:
    """Test CSV rendering."""

    def test_precision_and_line_endings(self):
        """Test 17 significant digits and LF endings."""
        text = frame_to_csv(pd.DataFrame({"a": [0.1], "b": [2]}))
        assert text == "a,b\n0.10000000000000001,2\n"

    def test_round_trips_floats(self):
        """Test written floats parse back to the same doubles."""
        values = [1 / 3, 2.0 ** -1074, 0.9343200493]
        text = frame_to_csv(pd.DataFrame({"x": values}))
        parsed = [float(line) for line in text.splitlines()[1:]]
        assert parsed == values
