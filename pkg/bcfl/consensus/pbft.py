"""Committee vote counting in the style of PBFT.

Modelled as a single vote-counting round with explicit message accounting
(prepare plus commit, all-to-all), not the asynchronous three-phase protocol.
"""

from collections.abc import Mapping, Sequence

import numpy as np

from bcfl.consensus.outcome import ConsensusCosts, ConsensusOutcome
from bcfl.errors import ConfigurationError, ProtocolError


def pbft_messages(committee_size: int) -> int:
    """2 * |committee|^2."""
    return 2 * committee_size * committee_size


def pbft_commit(
    proposal_digest: bytes,
    committee: Sequence[int],
    votes: Mapping[int, bytes],
    f: int,
    costs: ConsensusCosts | None = None,
) -> ConsensusOutcome:
    """Commit iff at least 2f + 1 committee votes match the proposal.

    Raises:
        ConfigurationError: If the committee is smaller than 3f + 1
        ProtocolError: If a non-member voted
    """
    if f < 0 or len(committee) < 3 * f + 1:
        raise ConfigurationError(
            f"committee of {len(committee)} cannot tolerate f={f} (needs {3 * f + 1})"
        )
    members = set(committee)
    outsiders = sorted(set(votes) - members)
    if outsiders:
        raise ProtocolError(f"votes from non-members {outsiders}")
    matching = sum(1 for digest in votes.values() if digest == proposal_digest)
    committed = matching >= 2 * f + 1
    costs = costs or ConsensusCosts()
    messages = pbft_messages(len(committee))
    return ConsensusOutcome(
        leader=proposal_digest.hex()[:16] if committed else "",
        committed=committed,
        consensus_messages=messages,
        consensus_virtual_delay=costs.delay(messages),
    )


def select_committee(nodes: Sequence[int], size: int, rng: np.random.Generator) -> list[int]:
    """Uniform sample without replacement, returned sorted.

    Raises:
        ConfigurationError: If size exceeds the number of nodes
    """
    if size > len(nodes) or size < 0:
        raise ConfigurationError(f"committee size {size} exceeds {len(nodes)} nodes")
    ordered = sorted(nodes)
    chosen = rng.choice(len(ordered), size=size, replace=False)
    return sorted(ordered[i] for i in chosen)
