"""Outcome of a scenario run."""

import math
from dataclasses import dataclass, field
from typing import Any

from bcfl.adversary.security import DetectionReport
from bcfl.config import ScenarioConfig
from bcfl.core.runlog import RunLog
from bcfl.core.types import RoundMetrics
from bcfl.ledger.chain import Chain, ChainValidation
from bcfl.netsim.events import DelayEvent
from bcfl.scheduler.qlearning import QTable


@dataclass(frozen=True)
class RunSummary:
    """Headline figures of one run.

    ``accuracy_improvement`` is always ``final_accuracy - initial_accuracy``.
    Real-time fields depend on the host; everything else is reproducible.
    """

    name: str
    rounds: tuple[RoundMetrics, ...]
    initial_accuracy: float
    final_accuracy: float
    mean_delay: float
    security_score: float
    compliance_score: float
    blocks_mined: int
    chain_length: int
    ledger_valid: bool | None
    tip_hash: str | None
    dataset_digest: str
    detection: DetectionReport
    rewards_paid: float
    mean_mining_seconds: float
    runtime_seconds: float

    @property
    def accuracy_improvement(self) -> float:
        return self.final_accuracy - self.initial_accuracy

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "rounds": len(self.rounds),
            "initial_accuracy": self.initial_accuracy,
            "final_accuracy": self.final_accuracy,
            "accuracy_improvement": self.accuracy_improvement,
            "mean_delay": self.mean_delay,
            "security_score": self.security_score,
            "compliance_score": self.compliance_score,
            "blocks_mined": self.blocks_mined,
            "chain_length": self.chain_length,
            "ledger_valid": self.ledger_valid,
            "tip_hash": self.tip_hash,
            "dataset_digest": self.dataset_digest,
            "poison_rejection_rate": self.detection.poison_rejection_rate,
            "sybil_weight_mass": self.detection.sybil_weight_mass,
            "rewards_paid": self.rewards_paid,
            "rolled_back_rounds": sum(1 for m in self.rounds if m.rolled_back),
            "mean_mining_seconds": self.mean_mining_seconds,
            "runtime_seconds": self.runtime_seconds,
        }


def mean_delay(metrics: list[RoundMetrics] | tuple[RoundMetrics, ...]) -> float:
    """Mean Total-Delay over rounds."""
    if not metrics:
        return 0.0
    return math.fsum(m.delay.total for m in metrics) / len(metrics)


@dataclass
class RunResult:
    """Everything a run produced.

    Attributes:
        config: Scenario that was run
        summary: Headline figures
        metrics: Per-round metrics
        chain: Final ledger, None without a ledger
        validation: validate_chain result of the final ledger
        run_log: Per-update audit trail
        events: Delay event log of all rounds, in processing order
        qtable: Offloading agent values, None without RL
        pretrain_rewards: Cumulative reward per pretraining episode
        rewards: Per-round contract payouts by client id
    """

    config: ScenarioConfig
    summary: RunSummary
    metrics: list[RoundMetrics]
    chain: Chain | None
    validation: ChainValidation | None
    run_log: RunLog
    events: list[DelayEvent]
    qtable: QTable | None = None
    pretrain_rewards: list[float] = field(default_factory=list)
    rewards: list[dict[int, float]] = field(default_factory=list)
