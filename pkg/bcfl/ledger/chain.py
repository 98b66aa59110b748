"""Proof-of-work mining and chain validation."""

import logging
import math
import time
from collections.abc import Sequence
from dataclasses import dataclass

from bcfl.core.encoding import ZERO_HASH, BlockHeader, UpdateRecord, payload_digest
from bcfl.errors import ContractError, DomainError, MiningError
from bcfl.ledger.block import Block, hash_header, meets_difficulty

logger = logging.getLogger(__name__)

MAX_NONCE = 2**64 - 1


@dataclass(frozen=True)
class MiningResult:
    """Mined block with its search cost.

    Attributes:
        block: Block whose hash meets the difficulty
        trials: Number of nonces tried (nonce + 1)
        seconds: Real (host) time spent searching
    """

    block: Block
    trials: int
    seconds: float


def mine_block(
    transactions: Sequence[UpdateRecord],
    prev_hash: bytes,
    difficulty: int,
    virtual_timestamp_ms: int,
    index: int,
    max_nonce: int = MAX_NONCE,
) -> MiningResult:
    """Sequential nonce search from 0 upward.

    Raises:
        ContractError: If difficulty is negative or above 64
        MiningError: If no nonce up to ``max_nonce`` satisfies the difficulty
    """
    if not 0 <= difficulty <= 64:
        raise ContractError(f"difficulty must lie in [0, 64], got {difficulty}")
    records = tuple(transactions)
    header = BlockHeader(
        index=index,
        prev_hash=prev_hash,
        payload_digest=payload_digest(list(records)),
        virtual_timestamp_ms=virtual_timestamp_ms,
        nonce=0,
        difficulty=difficulty,
    )
    started = time.perf_counter()
    nonce = 0
    while not meets_difficulty(hash_header(header), difficulty):
        if nonce >= max_nonce:
            raise MiningError(f"nonce space exhausted at difficulty {difficulty}")
        nonce += 1
        header = header.with_nonce(nonce)
    elapsed = time.perf_counter() - started
    logger.debug("mined block %d at difficulty %d after %d trials", index, difficulty, nonce + 1)
    return MiningResult(Block(header, records), trials=nonce + 1, seconds=elapsed)


@dataclass(frozen=True)
class ChainValidation:
    """Result of :func:`validate_chain`.

    Attributes:
        ok: True if every check passed
        first_invalid_index: Position of the first failing block, or None
        reason: Human-readable description of the failure
    """

    ok: bool
    first_invalid_index: int | None = None
    reason: str = ""


class Chain:
    """Append-only list of hash-linked blocks, starting at genesis."""

    def __init__(self, blocks: Sequence[Block] | None = None):
        self.blocks: list[Block] = list(blocks or [])

    @classmethod
    def genesis(cls, difficulty: int = 0) -> "Chain":
        """Chain holding only a mined, empty genesis block at virtual time 0."""
        mined = mine_block([], ZERO_HASH, difficulty, 0, index=0)
        return cls([mined.block])

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __getitem__(self, index: int) -> Block:
        return self.blocks[index]

    @property
    def tip(self) -> Block:
        if not self.blocks:
            raise DomainError("empty chain has no tip")
        return self.blocks[-1]

    @property
    def tip_hash(self) -> bytes:
        return self.tip.hash

    @property
    def difficulty(self) -> int:
        return self.tip.header.difficulty

    def append(self, block: Block) -> None:
        """Append a block that extends the current tip.

        Raises:
            ContractError: If the block does not link to the tip or its index is wrong
        """
        if block.header.prev_hash != self.tip_hash or block.index != len(self.blocks):
            raise ContractError(f"block {block.index} does not extend the chain tip")
        self.blocks.append(block)

    def mine_next(
        self, transactions: Sequence[UpdateRecord], virtual_timestamp_ms: int
    ) -> MiningResult:
        """Mine a block on the tip at the chain's difficulty and append it."""
        result = mine_block(
            transactions,
            self.tip_hash,
            self.difficulty,
            virtual_timestamp_ms,
            index=len(self.blocks),
        )
        self.append(result.block)
        return result


def _record_problem(block: Block) -> str | None:
    for record in block.transactions:
        acc = record.validation_accuracy
        if not math.isfinite(acc) or not 0.0 <= acc <= 1.0:
            return f"record of client {record.client_id} has validation accuracy {acc!r}"
        if not math.isfinite(record.reported_l2_norm) or record.reported_l2_norm < 0:
            return f"record of client {record.client_id} has invalid norm"
    return None


def validate_chain(
    chain: Chain | Sequence[Block], expected_tip: bytes | None = None
) -> ChainValidation:
    """Check genesis form, linkage, payload digests and difficulty prefixes in order.

    Args:
        chain: Blocks to check
        expected_tip: Optional anchored hash of the last block

    Returns:
        ChainValidation naming the first failing block

    Raises:
        DomainError: If the chain is empty
    """
    blocks = list(chain)
    if not blocks:
        raise DomainError("cannot validate an empty chain")

    prev: Block | None = None
    for position, block in enumerate(blocks):
        header = block.header
        if header.index != position:
            return ChainValidation(False, position, f"index {header.index} at position {position}")
        if prev is None:
            if header.prev_hash != ZERO_HASH:
                return ChainValidation(False, 0, "genesis prev_hash is not zero")
        else:
            if header.prev_hash != prev.hash:
                return ChainValidation(False, position, "prev_hash does not match predecessor")
            if header.difficulty != prev.header.difficulty:
                return ChainValidation(False, position, "difficulty differs from predecessor")
        if not block.payload_matches():
            return ChainValidation(False, position, "payload digest mismatch")
        problem = _record_problem(block)
        if problem:
            return ChainValidation(False, position, problem)
        if not meets_difficulty(block.hash, header.difficulty):
            return ChainValidation(False, position, "hash does not meet difficulty")
        prev = block

    if expected_tip is not None and blocks[-1].hash != expected_tip:
        return ChainValidation(False, len(blocks) - 1, "tip hash does not match anchor")
    return ChainValidation(True)
