"""System state observed by the offloading agent."""

from bisect import bisect_right
from collections.abc import Mapping
from dataclasses import dataclass, field
from itertools import product

from bcfl.errors import ContractError
from bcfl.scheduler.qlearning import Action, State


@dataclass(frozen=True)
class SystemState:
    """Load seen when a task is placed.

    Attributes:
        fog_utilization: Background load of the client's edge fog
        cloud_utilization: Background load of the cloud
        task_size_factor: Task size relative to the calibrated size
        candidates: Node id reached by each action
    """

    fog_utilization: float
    cloud_utilization: float
    task_size_factor: float
    candidates: Mapping[Action, str] = field(default_factory=dict)


@dataclass(frozen=True)
class StateDiscretizer:
    """Buckets low/medium/high for each of the three state features."""

    utilization_thresholds: tuple[float, float] = (1 / 6, 1 / 3)
    size_thresholds: tuple[float, float] = (5 / 6, 7 / 6)

    def __post_init__(self) -> None:
        for name in ("utilization_thresholds", "size_thresholds"):
            low, high = getattr(self, name)
            if not low < high:
                raise ContractError(f"{name} must be strictly increasing")

    def bucket(self, system: SystemState) -> State:
        return (
            bisect_right(self.utilization_thresholds, system.fog_utilization),
            bisect_right(self.utilization_thresholds, system.cloud_utilization),
            bisect_right(self.size_thresholds, system.task_size_factor),
        )

    @staticmethod
    def all_states() -> list[State]:
        """The 27 discrete states in lexicographic order."""
        return [(f, c, s) for f, c, s in product(range(3), repeat=3)]
