"""Offloading agent: pretraining on the delay model and online decisions."""

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from bcfl.core.rng import Stream, substream
from bcfl.errors import ContractError
from bcfl.netsim.model import SensingTask, Tier
from bcfl.netsim.network import NetworkState, OffloadNetwork, edge_fog
from bcfl.netsim.topology import ROOT, client_node
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

logger = logging.getLogger(__name__)

ACTION_TIER = {Action.CLIENT: Tier.CLIENT, Action.FOG: Tier.FOG, Action.CLOUD: Tier.CLOUD}


class Environment(Protocol):
    """Episodic environment; ``step`` returns None as next state at episode end."""

    def reset(self, episode: int) -> State: ...

    def step(self, action: Action) -> tuple[float, State | None]: ...


@dataclass(frozen=True)
class OffloadDecision:
    state: State
    action: Action
    node: str


def choose_offload(
    task: SensingTask,
    system: SystemState,
    q: QTable,
    params: RewardParams,
    rng: np.random.Generator,
    discretizer: StateDiscretizer | None = None,
) -> OffloadDecision:
    """Bucket the system state, pick an action epsilon-greedily and map it to a node."""
    discretizer = discretizer or StateDiscretizer()
    state = discretizer.bucket(system)
    action = epsilon_greedy(q, state, params.epsilon, rng)
    if action not in system.candidates:
        raise ContractError(
            f"no {action.name.lower()} node offered to client {task.origin_client}"
        )
    return OffloadDecision(state, action, system.candidates[action])


def system_state_for(
    network: OffloadNetwork, client_id: int, net_state: NetworkState
) -> SystemState:
    """What client ``client_id`` observes before placing its task."""
    fog = edge_fog(client_id, network.calibration.clients_per_fog)
    return SystemState(
        fog_utilization=net_state.fog_utilization[fog],
        cloud_utilization=net_state.cloud_utilization,
        task_size_factor=net_state.task_factors[client_id],
        candidates={
            Action.CLIENT: client_node(client_id),
            Action.FOG: fog,
            Action.CLOUD: ROOT,
        },
    )


class OffloadAgent:
    """Tabular Q-learning agent shared by all clients of a scenario.

    Attributes:
        q: Learned action values
        params: Reward weights and hyperparameters
        discretizer: Maps system states to buckets
        rng: RL substream driving exploration
    """

    def __init__(
        self,
        params: RewardParams,
        rng: np.random.Generator,
        discretizer: StateDiscretizer | None = None,
        q: QTable | None = None,
    ):
        self.params = params
        self.rng = rng
        self.discretizer = discretizer or StateDiscretizer()
        self.q = q if q is not None else QTable()

    def act(self, state: State) -> Action:
        return epsilon_greedy(self.q, state, self.params.epsilon, self.rng)

    def learn(self, state: State, action: Action, r: float, next_state: State | None) -> None:
        q_update(self.q, state, action, r, next_state, self.params)

    def train(self, env: Environment, episodes: int) -> list[float]:
        """Run ``episodes`` episodes, returning the cumulative reward of each."""
        history = []
        for episode in range(episodes):
            state: State | None = env.reset(episode)
            total = 0.0
            while state is not None:
                action = self.act(state)
                r, next_state = env.step(action)
                self.learn(state, action, r, next_state)
                total += r
                state = next_state
            history.append(total)
        if history:
            logger.debug(
                "trained %d episodes, last cumulative reward %.4f", episodes, history[-1]
            )
        return history

    def decide(self, task: SensingTask, system: SystemState) -> OffloadDecision:
        return choose_offload(task, system, self.q, self.params, self.rng, self.discretizer)

    def greedy_policy(self) -> Mapping[State, Action]:
        """Greedy action for every discrete state."""
        return {s: self.q.best_action(s) for s in self.discretizer.all_states()}


class DelayEnvironment:
    """Pretraining environment over the offload network.

    One episode places one task per client under a freshly drawn network
    state; the reward is the delay penalty alone (no accuracy gain).
    """

    def __init__(
        self,
        network: OffloadNetwork,
        params: RewardParams,
        discretizer: StateDiscretizer,
        seed: int,
    ):
        self.network = network
        self.params = params
        self.discretizer = discretizer
        self.seed = seed
        self._net_state: NetworkState | None = None
        self._client = 0

    def _observe(self) -> State:
        assert self._net_state is not None
        system = system_state_for(self.network, self._client, self._net_state)
        return self.discretizer.bucket(system)

    def reset(self, episode: int) -> State:
        rng = substream(self.seed, Stream.RL, 0, episode)
        self._net_state = self.network.draw_state(0, rng=rng)
        self._client = 0
        return self._observe()

    def step(self, action: Action) -> tuple[float, State | None]:
        assert self._net_state is not None
        task = self.network.task_for(self._client, self._net_state)
        delay = self.network.task_delay(task, ACTION_TIER[action], self._net_state)
        r = reward(0.0, delay, self.params)
        self._client += 1
        if self._client >= self.network.n_clients:
            return r, None
        return r, self._observe()
