"""Proof of Quality and Proof of Federated Learning leader election."""

import logging
from collections.abc import Mapping, Sequence

from bcfl.consensus.outcome import ConsensusCosts, ConsensusOutcome
from bcfl.core.types import ClientDataset, ModelParams
from bcfl.errors import DomainError
from bcfl.learning.model import evaluate
from bcfl.learning.updates import UpdateVector

logger = logging.getLogger(__name__)


def _argmax_lowest_id(scores: Mapping[int, float]) -> int:
    return min(scores, key=lambda node: (-scores[node], node))


def poq_select(
    validation_accuracies: Mapping[int, float],
    costs: ConsensusCosts | None = None,
) -> ConsensusOutcome:
    """Elect the node with the highest verified accuracy (lowest id on ties).

    Raises:
        DomainError: If no accuracies are given
    """
    if not validation_accuracies:
        raise DomainError("proof of quality needs at least one node")
    costs = costs or ConsensusCosts()
    leader = _argmax_lowest_id(validation_accuracies)
    messages = len(validation_accuracies)
    return ConsensusOutcome(
        leader=str(leader),
        committed=True,
        consensus_messages=messages,
        consensus_virtual_delay=costs.delay(messages),
    )


def pofl_round(
    candidates: Sequence[UpdateVector],
    shared_validation: ClientDataset | None,
    global_model: ModelParams,
    costs: ConsensusCosts | None = None,
) -> ConsensusOutcome:
    """Score every candidate as ``global + delta`` on the shared validation set.

    The miner of the best candidate wins; no hash puzzle is solved. Delay
    is the per-candidate evaluation cost on top of the message cost.

    Raises:
        DomainError: If there are no candidates or the validation set is empty
    """
    if not candidates:
        raise DomainError("proof of federated learning needs at least one candidate")
    if shared_validation is None or shared_validation.n == 0:
        raise DomainError("proof of federated learning needs a non-empty validation set")
    costs = costs or ConsensusCosts()
    scores = {
        c.client_id: evaluate(global_model.apply(c.delta), shared_validation).accuracy
        for c in candidates
    }
    leader = _argmax_lowest_id(scores)
    logger.debug("pofl winner %d with validation accuracy %.4f", leader, scores[leader])
    messages = len(candidates)
    return ConsensusOutcome(
        leader=str(leader),
        committed=True,
        consensus_messages=messages,
        consensus_virtual_delay=costs.delay(messages, len(candidates), costs.eval_seconds),
    )
