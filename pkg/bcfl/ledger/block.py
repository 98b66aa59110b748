"""Blocks and header hashing."""

import hashlib
from dataclasses import dataclass, field

from bcfl.core.encoding import BlockHeader, UpdateRecord, encode_block_header, payload_digest


def hash_header(header: BlockHeader) -> bytes:
    """SHA-256 of the 89-byte canonical header encoding."""
    return hashlib.sha256(encode_block_header(header)).digest()


def meets_difficulty(digest: bytes, difficulty: int) -> bool:
    """True if the hex form of ``digest`` starts with ``difficulty`` zeros."""
    return digest.hex().startswith("0" * difficulty)


@dataclass(frozen=True)
class Block:
    """Header plus the ordered update records it commits to."""

    header: BlockHeader
    transactions: tuple[UpdateRecord, ...] = field(default_factory=tuple)

    @property
    def hash(self) -> bytes:
        return hash_header(self.header)

    @property
    def index(self) -> int:
        return self.header.index

    def payload_matches(self) -> bool:
        """Whether the header's payload digest commits to ``transactions``."""
        return payload_digest(list(self.transactions)) == self.header.payload_digest
