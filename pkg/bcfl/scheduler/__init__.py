"""Q-learning task offloading scheduler."""

from bcfl.scheduler.agent import (
    ACTION_TIER,
    DelayEnvironment,
    Environment,
    OffloadAgent,
    OffloadDecision,
    choose_offload,
    system_state_for,
)
from bcfl.scheduler.qlearning import (
    Action,
    QTable,
    RewardParams,
    State,
    epsilon_greedy,
    q_update,
    reward,
)
from bcfl.scheduler.state import StateDiscretizer, SystemState

__all__ = [
    "ACTION_TIER",
    "Action",
    "DelayEnvironment",
    "Environment",
    "OffloadAgent",
    "OffloadDecision",
    "QTable",
    "RewardParams",
    "State",
    "StateDiscretizer",
    "SystemState",
    "choose_offload",
    "epsilon_greedy",
    "q_update",
    "reward",
    "system_state_for",
]
