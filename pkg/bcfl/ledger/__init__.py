"""Hash-linked ledger of model updates, mining and contracts."""

from bcfl.ledger.block import Block, hash_header, meets_difficulty
from bcfl.ledger.chain import Chain, ChainValidation, MiningResult, mine_block, validate_chain
from bcfl.ledger.contracts import (
    Admission,
    Credential,
    ParticipantRegistry,
    TrustModel,
    admit_participant,
    allocate_rewards,
)
from bcfl.ledger.storage import decode_ledger, encode_ledger, read_ledger, write_ledger

__all__ = [
    "Admission",
    "Block",
    "Chain",
    "ChainValidation",
    "Credential",
    "MiningResult",
    "ParticipantRegistry",
    "TrustModel",
    "admit_participant",
    "allocate_rewards",
    "decode_ledger",
    "encode_ledger",
    "hash_header",
    "meets_difficulty",
    "mine_block",
    "read_ledger",
    "validate_chain",
]
