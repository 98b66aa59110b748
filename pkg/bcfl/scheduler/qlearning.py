"""Tabular Q-learning primitives for offloading decisions."""

import json
import math
from collections.abc import Iterator
from dataclasses import dataclass
from enum import IntEnum
from typing import Any

import numpy as np
from numpy.typing import NDArray

from bcfl.errors import ContractError, DomainError

State = tuple[int, int, int]  # (fog load bucket, cloud load bucket, task size bucket)


class Action(IntEnum):
    CLIENT = 0
    FOG = 1
    CLOUD = 2


N_ACTIONS = len(Action)


@dataclass(frozen=True)
class RewardParams:
    """Reward weights and learning hyperparameters.

    Attributes:
        w_acc: Weight of the concave accuracy term (>= 0)
        w_delay: Weight of the delay penalty (>= 0)
        gamma: Discount in [0, 1)
        alpha: Learning rate in (0, 1]
        epsilon: Exploration probability in [0, 1]
    """

    w_acc: float = 1.0
    w_delay: float = 1.0
    gamma: float = 0.5
    alpha: float = 0.1
    epsilon: float = 0.05

    def __post_init__(self) -> None:
        if self.w_acc < 0 or self.w_delay < 0:
            raise ContractError("reward weights must be non-negative")
        if not 0 <= self.gamma < 1:
            raise ContractError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not 0 < self.alpha <= 1:
            raise ContractError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 <= self.epsilon <= 1:
            raise ContractError(f"epsilon must lie in [0, 1], got {self.epsilon}")


class QTable:
    """Action values per discretized state, zero until first written."""

    def __init__(self) -> None:
        self._values: dict[State, NDArray[np.float64]] = {}

    def row(self, state: State) -> NDArray[np.float64]:
        """Copy of the action values of ``state``."""
        values = self._values.get(state)
        return np.zeros(N_ACTIONS) if values is None else values.copy()

    def get(self, state: State, action: Action) -> float:
        values = self._values.get(state)
        return 0.0 if values is None else float(values[action])

    def set(self, state: State, action: Action, value: float) -> None:
        if not math.isfinite(value):
            raise DomainError(f"non-finite Q value for {state}, {action.name}")
        values = self._values.setdefault(state, np.zeros(N_ACTIONS))
        values[action] = value

    def best_action(self, state: State) -> Action:
        """Argmax, lowest action index on ties."""
        return Action(int(np.argmax(self.row(state))))

    def max_value(self, state: State) -> float:
        return float(np.max(self.row(state)))

    def states(self) -> Iterator[State]:
        return iter(sorted(self._values))

    def __len__(self) -> int:
        return len(self._values)

    def to_dict(self) -> dict[str, Any]:
        return {
            "actions": [a.name.lower() for a in Action],
            "states": [
                {"state": list(s), "values": [float(v) for v in self._values[s]]}
                for s in self.states()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "QTable":
        table = cls()
        for entry in data["states"]:
            state = tuple(int(x) for x in entry["state"])
            for action, value in zip(Action, entry["values"], strict=True):
                table.set(state, action, float(value))  # type: ignore[arg-type]
        return table


def reward(accuracy_gain: float, delay: float, params: RewardParams) -> float:
    """w_acc * ln(1 + max(0, gain)) - w_delay * delay.

    Raises:
        ContractError: If delay is negative
    """
    if delay < 0:
        raise ContractError(f"delay must be non-negative, got {delay}")
    return params.w_acc * math.log1p(max(0.0, accuracy_gain)) - params.w_delay * delay


def q_update(
    q: QTable,
    state: State,
    action: Action,
    r: float,
    next_state: State | None,
    params: RewardParams,
) -> QTable:
    """Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)), in place.

    A ``next_state`` of None marks a terminal step (no bootstrap).
    """
    future = 0.0 if next_state is None else q.max_value(next_state)
    current = q.get(state, action)
    q.set(state, action, current + params.alpha * (r + params.gamma * future - current))
    return q


def epsilon_greedy(
    q: QTable, state: State, epsilon: float, rng: np.random.Generator
) -> Action:
    """Uniform random action with probability epsilon, else the greedy action."""
    if not 0 <= epsilon <= 1:
        raise ContractError(f"epsilon must lie in [0, 1], got {epsilon}")
    if rng.random() < epsilon:
        return Action(int(rng.integers(N_ACTIONS)))
    return q.best_action(state)
