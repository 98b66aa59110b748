"""Smart-contract duties: participant admission and reward allocation.

Credentials are opaque ``org/subject/token`` strings checked against a
per-scenario registry; there is no cryptography behind them.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

from bcfl.core.encoding import CREDENTIAL_FIELD, UpdateRecord
from bcfl.errors import ContractError


class TrustModel(StrEnum):
    PERMISSIONLESS = "permissionless"
    CONSORTIUM = "consortium"
    PERMISSIONED = "permissioned"


@dataclass(frozen=True)
class Credential:
    """Participant credential."""

    org: str
    subject: str
    token: str

    def encode(self) -> str:
        return f"{self.org}/{self.subject}/{self.token}"

    @classmethod
    def parse(cls, raw: str) -> "Credential":
        """Parse ``org/subject/token``.

        Raises:
            ContractError: If the string is not three non-empty ASCII parts
                or does not fit the ledger's credential field
        """
        if not raw.isascii() or len(raw) > CREDENTIAL_FIELD:
            raise ContractError(f"credential must be ASCII of at most {CREDENTIAL_FIELD} bytes")
        parts = raw.split("/")
        if len(parts) != 3 or not all(parts):
            raise ContractError("credential must have the form org/subject/token")
        return cls(*parts)


@dataclass(frozen=True)
class ParticipantRegistry:
    """Scenario-wide admission state.

    Attributes:
        trust_model: Admission rule in force
        consortium: Organizations admitted under the consortium model
        authorized: Exact credential strings admitted under the permissioned model
    """

    trust_model: TrustModel
    consortium: frozenset[str] = field(default_factory=frozenset)
    authorized: frozenset[str] = field(default_factory=frozenset)


@dataclass(frozen=True)
class Admission:
    admitted: bool
    reason: str = ""


def admit_participant(
    trust_model: TrustModel,
    credential: str,
    registry: ParticipantRegistry,
) -> Admission:
    """Apply the trust model's admission rule to one credential."""
    try:
        parsed = Credential.parse(credential)
    except ContractError as exc:
        return Admission(False, f"malformed credential: {exc}")

    match trust_model:
        case TrustModel.PERMISSIONLESS:
            return Admission(True)
        case TrustModel.CONSORTIUM:
            if parsed.org in registry.consortium:
                return Admission(True)
            return Admission(False, f"organization '{parsed.org}' is not in the consortium")
        case TrustModel.PERMISSIONED:
            if credential in registry.authorized:
                return Admission(True)
            return Admission(False, "credential is not pre-authorized")
    raise ContractError(f"unknown trust model {trust_model!r}")


def allocate_rewards(
    records: Sequence[UpdateRecord],
    accuracy_before: float,
    accuracy_after: float,
    pool: float,
) -> dict[int, float]:
    """Split the reward pool over the round's accepted records.

    Nothing is paid unless the round improved global accuracy; otherwise the
    pool is shared in proportion to each record's validation accuracy, or
    uniformly if all of them are zero.

    Raises:
        ContractError: If pool is negative
    """
    if pool < 0:
        raise ContractError(f"reward pool must be non-negative, got {pool}")
    rewards = {r.client_id: 0.0 for r in records}
    if accuracy_after <= accuracy_before or not records or pool == 0:
        return rewards
    total = math.fsum(r.validation_accuracy for r in records)
    for record in records:
        if total > 0:
            share = record.validation_accuracy / total
        else:
            share = 1.0 / len(records)
        rewards[record.client_id] += pool * share
    return rewards
