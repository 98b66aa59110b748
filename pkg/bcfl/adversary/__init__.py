"""Attack injection and security evaluation."""

from bcfl.adversary.attacks import SYBIL_ID_BASE, is_synthetic_id, poison, spawn_sybils
from bcfl.adversary.security import (
    DetectionReport,
    ScenarioFeatures,
    SecurityCalibration,
    SecurityRubric,
    detection_rate,
    load_calibration,
    security_score,
    shipped_calibration,
)

__all__ = [
    "SYBIL_ID_BASE",
    "DetectionReport",
    "ScenarioFeatures",
    "SecurityCalibration",
    "SecurityRubric",
    "detection_rate",
    "is_synthetic_id",
    "load_calibration",
    "poison",
    "security_score",
    "shipped_calibration",
    "spawn_sybils",
]
