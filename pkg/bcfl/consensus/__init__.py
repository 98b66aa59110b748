"""ML-aware consensus strategies."""

from bcfl.consensus.outcome import ConsensusCosts, ConsensusOutcome
from bcfl.consensus.pbft import pbft_commit, pbft_messages, select_committee
from bcfl.consensus.quality import pofl_round, poq_select
from bcfl.consensus.work import pow_outcome

__all__ = [
    "ConsensusCosts",
    "ConsensusOutcome",
    "pbft_commit",
    "pbft_messages",
    "pofl_round",
    "poq_select",
    "pow_outcome",
    "select_committee",
]
