"""Exception hierarchy.

Every error derives from the builtin it refines so that callers written
against ``ValueError``/``RuntimeError`` keep working.
"""


class BCFLError(Exception):
    """Base class for simulator errors."""


class ConfigurationError(BCFLError, ValueError):
    """Invalid scenario or call configuration."""


class ContractError(BCFLError, ValueError):
    """A precondition of an operation was violated."""


class ShapeError(ContractError):
    """Array dimensions do not agree."""


class DomainError(BCFLError, ValueError):
    """Input outside the domain of a mathematical operation (e.g. empty batch)."""


class ProtocolError(BCFLError, ValueError):
    """Consensus protocol rule violated."""


class LedgerFormatError(BCFLError, ValueError):
    """Ledger bytes do not follow the ledger file format."""


class MiningError(BCFLError, RuntimeError):
    """Proof-of-work nonce space exhausted."""


class RoundError(BCFLError, RuntimeError):
    """Failure during scenario orchestration.

    Attributes:
        round_index: 1-based round in which the failure happened (0 = setup)
        phase: Orchestration phase name
    """

    def __init__(self, round_index: int, phase: str, cause: Exception):
        self.round_index = round_index
        self.phase = phase
        self.cause = cause
        super().__init__(f"round {round_index}, phase '{phase}': {cause}")


class ComparisonError(BCFLError, RuntimeError):
    """A baseline run failed during a comparison.

    Attributes:
        method: Name of the failing baseline
    """

    def __init__(self, method: str, cause: Exception):
        self.method = method
        self.cause = cause
        super().__init__(f"baseline '{method}' failed: {cause}")
