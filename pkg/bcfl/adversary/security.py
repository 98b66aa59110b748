"""Security scoring rubric and defense efficacy metrics.

The rubric weights and the per-baseline credits are calibration constants
shipped in ``scenarios/security_calibration.json``; they reconstruct a
security column for the canonical baselines and are not derived truths.
"""

import logging
import math
from dataclasses import dataclass, fields
from functools import cache
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from bcfl.config import CALIBRATION_PATH, parse_json
from bcfl.core.runlog import RunLog
from bcfl.errors import ConfigurationError

logger = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SecurityRubric:
    """Weight of each security feature; weights sum to 1."""

    immutable_ledger: float = 0.5
    consensus_validation: float = 0.2
    robust_aggregation: float = 0.1
    dp_noise: float = 0.1
    rl_anomaly: float = 0.1

    def __post_init__(self) -> None:
        weights = [getattr(self, f.name) for f in fields(self)]
        if min(weights) < 0:
            raise ConfigurationError("rubric weights must be non-negative")
        if abs(math.fsum(weights) - 1.0) > WEIGHT_TOLERANCE:
            raise ConfigurationError(f"rubric weights sum to {math.fsum(weights)}, expected 1")


@dataclass(frozen=True)
class ScenarioFeatures:
    """Security-relevant facts of a completed run.

    Attributes:
        ledger_present: The run kept a ledger
        ledger_valid: validate_chain accepted the final ledger
        consensus_validation: Consensus validated updates on a shared set
        robust_aggregation: Krum or FoolsGold was active
        dp_noise: Updates were clipped and noised
        rl_anomaly: The scheduler rolled back anomalous aggregates
        profile: Baseline credit key, if any
    """

    ledger_present: bool = False
    ledger_valid: bool = False
    consensus_validation: bool = False
    robust_aggregation: bool = False
    dp_noise: bool = False
    rl_anomaly: bool = False
    profile: str | None = None


class _Weighted(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    weight: float = Field(ge=0, le=1)
    description: str = ""


class _Credit(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    credit: float = Field(ge=0, le=1)
    description: str = ""


class SecurityCalibration(BaseModel):
    """Shipped rubric weights and baseline credits."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    description: str = ""
    rubric: dict[str, _Weighted]
    baseline_credits: dict[str, _Credit] = {}

    def to_rubric(self) -> SecurityRubric:
        expected = {f.name for f in fields(SecurityRubric)}
        if set(self.rubric) != expected:
            raise ConfigurationError(f"rubric must define exactly {sorted(expected)}")
        return SecurityRubric(**{name: item.weight for name, item in self.rubric.items()})

    def credit(self, profile: str | None) -> float:
        if profile is None:
            return 0.0
        if profile not in self.baseline_credits:
            raise ConfigurationError(f"security_profile: unknown profile '{profile}'")
        return self.baseline_credits[profile].credit


def load_calibration(path: str | Path = CALIBRATION_PATH) -> SecurityCalibration:
    """Read and validate a security calibration file.

    Raises:
        ConfigurationError: If the file is unreadable or invalid
    """
    path = Path(path)
    try:
        data = parse_json(path.read_text(encoding="utf-8"))
        calibration = SecurityCalibration.model_validate(data)
    except OSError as exc:
        raise ConfigurationError(f"cannot read calibration {path}: {exc}") from exc
    except ValidationError as exc:
        raise ConfigurationError(f"invalid calibration {path}: {exc}") from exc
    calibration.to_rubric()
    return calibration


@cache
def shipped_calibration() -> SecurityCalibration:
    return load_calibration(CALIBRATION_PATH)


def security_score(
    features: ScenarioFeatures,
    calibration: SecurityCalibration | None = None,
) -> float:
    """Sum of rubric weights of satisfied features plus the profile's credit, capped at 1.

    A claimed ledger that failed validation earns nothing for immutability.
    """
    calibration = calibration or shipped_calibration()
    rubric = calibration.to_rubric()
    earned = []
    if features.ledger_present and features.ledger_valid:
        earned.append(rubric.immutable_ledger)
    if features.consensus_validation:
        earned.append(rubric.consensus_validation)
    if features.robust_aggregation:
        earned.append(rubric.robust_aggregation)
    if features.dp_noise:
        earned.append(rubric.dp_noise)
    if features.rl_anomaly:
        earned.append(rubric.rl_anomaly)
    earned.append(calibration.credit(features.profile))
    # 0.5 + 0.2 + 0.1 + 0.1 must compare equal to 0.9
    return min(1.0, round(math.fsum(earned), 12))


@dataclass(frozen=True)
class DetectionReport:
    """Defense efficacy; None means not applicable to the run."""

    poison_rejection_rate: float | None
    sybil_weight_mass: float | None


def detection_rate(run_log: RunLog) -> DetectionReport:
    """Share of poisoned updates excluded by the defenses, and mean per-round
    aggregation weight share of synthetic identities."""
    if not run_log.attack_enabled:
        return DetectionReport(None, None)

    poisoned = [e for e in run_log.entries if e.poisoned and e.admitted and not e.synthetic]
    if not poisoned:
        rejection = None
    elif not run_log.defense_enabled:
        rejection = 0.0
    else:
        rejection = sum(1 for e in poisoned if not e.accepted) / len(poisoned)

    mass = None
    if run_log.sybil_attack:
        shares = []
        for round_index in run_log.rounds:
            entries = run_log.for_round(round_index)
            total = math.fsum(e.aggregation_weight for e in entries)
            if total > 0:
                synthetic = math.fsum(e.aggregation_weight for e in entries if e.synthetic)
                shares.append(synthetic / total)
        mass = math.fsum(shares) / len(shares) if shares else 0.0

    return DetectionReport(rejection, mass)
