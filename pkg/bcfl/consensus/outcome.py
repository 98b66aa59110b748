"""Common result type of all consensus strategies."""

from dataclasses import dataclass

from bcfl.errors import ContractError


@dataclass(frozen=True)
class ConsensusCosts:
    """Virtual-time cost model of consensus.

    Attributes:
        overhead_s: Fixed protocol overhead Z per round
        message_seconds: Cost per consensus message
        hash_seconds: Cost per proof-of-work trial
        eval_seconds: Cost of scoring one PoFL candidate
    """

    overhead_s: float = 0.0
    message_seconds: float = 0.0
    hash_seconds: float = 0.0
    eval_seconds: float = 0.0

    def __post_init__(self) -> None:
        if min(self.overhead_s, self.message_seconds, self.hash_seconds, self.eval_seconds) < 0:
            raise ContractError("consensus costs must be non-negative")

    def delay(self, messages: int, work_units: int = 0, unit_seconds: float = 0.0) -> float:
        """Z + messages * message_seconds + work_units * unit_seconds."""
        return self.overhead_s + messages * self.message_seconds + work_units * unit_seconds


@dataclass(frozen=True)
class ConsensusOutcome:
    """Decision of one consensus round.

    Attributes:
        leader: Winning node id, or the committee decision label
        committed: Whether the round's proposal was accepted
        consensus_messages: Messages exchanged by the protocol
        consensus_virtual_delay: Virtual seconds charged to the bve tier
    """

    leader: str
    committed: bool
    consensus_messages: int
    consensus_virtual_delay: float

    def __post_init__(self) -> None:
        if self.committed and not self.leader:
            raise ContractError("a committed outcome needs a leader or accepted proposal")
        if self.consensus_messages < 0 or self.consensus_virtual_delay < 0:
            raise ContractError("consensus messages and delay must be non-negative")
