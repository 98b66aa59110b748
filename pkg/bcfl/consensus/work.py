"""Proof of work seen through the consensus interface."""

from bcfl.consensus.outcome import ConsensusCosts, ConsensusOutcome


def pow_outcome(
    miner: str, trials: int, broadcast_messages: int, costs: ConsensusCosts
) -> ConsensusOutcome:
    """Outcome of a mined block: the miner leads and the block is broadcast.

    Delay is Z plus the broadcast cost plus ``trials * hash_seconds``.
    """
    return ConsensusOutcome(
        leader=miner,
        committed=True,
        consensus_messages=broadcast_messages,
        consensus_virtual_delay=costs.delay(broadcast_messages, trials, costs.hash_seconds),
    )
