"""Canonical byte encodings used for hashing and the ledger file.

All integers are big-endian; reals are IEEE-754 binary64 big-endian.

Block header (89 bytes)::

    index u64 | prev_hash 32 | payload_digest 32 | virtual_timestamp_ms u64
    | nonce u64 | difficulty u8

Transaction / update record (112 bytes)::

    client_id u64 | round u64 | update_digest 32 | reported_l2_norm f64 | validation_accuracy f64
    | credential 48 (ASCII, NUL padded)
"""

import hashlib
import struct
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from bcfl.errors import ContractError

HEADER_SIZE = 89
RECORD_SIZE = 112
CREDENTIAL_FIELD = 48
ZERO_HASH = bytes(32)

_HEADER = struct.Struct(">Q32s32sQQB")
_RECORD = struct.Struct(">QQ32sdd48s")
_TX_COUNT = struct.Struct(">I")

assert _HEADER.size == HEADER_SIZE
assert _RECORD.size == RECORD_SIZE


@dataclass(frozen=True)
class BlockHeader:
    """Header of a ledger block. Genesis has index 0 and an all-zero prev_hash."""

    index: int = 0
    prev_hash: bytes = ZERO_HASH
    payload_digest: bytes = ZERO_HASH
    virtual_timestamp_ms: int = 0
    nonce: int = 0
    difficulty: int = 0

    def with_nonce(self, nonce: int) -> "BlockHeader":
        return BlockHeader(
            self.index,
            self.prev_hash,
            self.payload_digest,
            self.virtual_timestamp_ms,
            nonce,
            self.difficulty,
        )


@dataclass(frozen=True)
class UpdateRecord:
    """Ledger transaction recording one accepted model update.

    No invariant checks at construction: records decoded from a tampered
    ledger must still be representable so validation can report them.
    """

    client_id: int
    round: int
    update_digest: bytes
    reported_l2_norm: float
    validation_accuracy: float
    credential: str


def encode_block_header(header: BlockHeader) -> bytes:
    """Encode a header into its canonical 89 bytes."""
    return _HEADER.pack(
        header.index,
        header.prev_hash,
        header.payload_digest,
        header.virtual_timestamp_ms,
        header.nonce,
        header.difficulty,
    )


def decode_block_header(data: bytes) -> BlockHeader:
    """Inverse of :func:`encode_block_header`."""
    index, prev, digest, ts, nonce, difficulty = _HEADER.unpack(data)
    return BlockHeader(index, prev, digest, ts, nonce, difficulty)


def encode_record(record: UpdateRecord) -> bytes:
    """Encode one transaction into its canonical 112 bytes."""
    credential = record.credential.encode("ascii", errors="surrogateescape")
    if len(credential) > CREDENTIAL_FIELD:
        raise ContractError(f"credential longer than {CREDENTIAL_FIELD} bytes")
    return _RECORD.pack(
        record.client_id,
        record.round,
        record.update_digest,
        record.reported_l2_norm,
        record.validation_accuracy,
        credential,
    )


def decode_record(data: bytes) -> UpdateRecord:
    """Inverse of :func:`encode_record` (lossless for any 112 input bytes)."""
    client_id, rnd, digest, norm, acc, credential = _RECORD.unpack(data)
    return UpdateRecord(
        client_id=client_id,
        round=rnd,
        update_digest=digest,
        reported_l2_norm=norm,
        validation_accuracy=acc,
        credential=credential.rstrip(b"\0").decode("ascii", errors="surrogateescape"),
    )


def encode_transactions(records: list[UpdateRecord]) -> bytes:
    """Transaction count (u32) followed by the encoded records."""
    return _TX_COUNT.pack(len(records)) + b"".join(encode_record(r) for r in records)


def payload_digest(records: list[UpdateRecord]) -> bytes:
    """SHA-256 of the canonical transaction list."""
    return hashlib.sha256(encode_transactions(records)).digest()


def encode_update(client_id: int, round_index: int, delta: NDArray[np.float64]) -> bytes:
    """Canonical encoding of an update vector: id u64 | round u64 | d u32 | delta f64 BE."""
    body = np.ascontiguousarray(delta, dtype=">f8").tobytes()
    return struct.pack(">QQI", client_id, round_index, delta.shape[0]) + body


def update_digest(client_id: int, round_index: int, delta: NDArray[np.float64]) -> bytes:
    """SHA-256 of :func:`encode_update`."""
    return hashlib.sha256(encode_update(client_id, round_index, delta)).digest()
