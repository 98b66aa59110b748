"""Ledger file format.

Layout::

    magic "BCFL" | version 0x01 | block count u64 BE
    per block: header (89 bytes) | tx count u32 BE | tx count x 112-byte records
"""

import logging
import struct
from pathlib import Path

from bcfl.core.encoding import (
    HEADER_SIZE,
    RECORD_SIZE,
    decode_block_header,
    decode_record,
    encode_block_header,
    encode_transactions,
)
from bcfl.errors import LedgerFormatError
from bcfl.ledger.block import Block
from bcfl.ledger.chain import Chain

logger = logging.getLogger(__name__)

MAGIC = b"BCFL"
VERSION = 1
_PREAMBLE = struct.Struct(">4sBQ")
_TX_COUNT = struct.Struct(">I")


def encode_ledger(chain: Chain) -> bytes:
    """Serialize a chain into the ledger file format."""
    parts = [_PREAMBLE.pack(MAGIC, VERSION, len(chain))]
    for block in chain:
        parts.append(encode_block_header(block.header))
        parts.append(encode_transactions(list(block.transactions)))
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise LedgerFormatError(
                f"truncated ledger: expected {size} bytes of {what} at offset {self.offset}"
            )
        chunk = self.data[self.offset : end]
        self.offset = end
        return chunk


def decode_ledger(data: bytes) -> Chain:
    """Parse ledger bytes without validating the chain itself.

    Raises:
        LedgerFormatError: On bad magic, unknown version, truncation or trailing bytes
    """
    reader = _Reader(data)
    magic, version, count = _PREAMBLE.unpack(reader.take(_PREAMBLE.size, "preamble"))
    if magic != MAGIC:
        raise LedgerFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise LedgerFormatError(f"unsupported ledger version {version}")

    blocks = []
    for _ in range(count):
        header = decode_block_header(reader.take(HEADER_SIZE, "block header"))
        (n_tx,) = _TX_COUNT.unpack(reader.take(_TX_COUNT.size, "transaction count"))
        records = tuple(
            decode_record(reader.take(RECORD_SIZE, "transaction")) for _ in range(n_tx)
        )
        blocks.append(Block(header, records))

    if reader.offset != len(data):
        raise LedgerFormatError(f"{len(data) - reader.offset} trailing bytes after last block")
    return Chain(blocks)


def write_ledger(chain: Chain, path: str | Path) -> Path:
    """Write the chain to ``path`` and return it."""
    path = Path(path)
    path.write_bytes(encode_ledger(chain))
    logger.info("wrote %d blocks to %s", len(chain), path)
    return path


def read_ledger(path: str | Path) -> Chain:
    """Read and decode a ledger file."""
    return decode_ledger(Path(path).read_bytes())
