"""Unit tests for mining, chain validation and the ledger file format."""

import numpy as np
import pytest

from bcfl.core.encoding import HEADER_SIZE, RECORD_SIZE, ZERO_HASH, UpdateRecord
from bcfl.errors import ContractError, DomainError, LedgerFormatError, MiningError
from bcfl.ledger import (
    Chain,
    decode_ledger,
    encode_ledger,
    hash_header,
    meets_difficulty,
    mine_block,
    read_ledger,
    validate_chain,
    write_ledger,
)

PREAMBLE_SIZE = 13
TX_PER_BLOCK = 3


def _records(round_index: int) -> list[UpdateRecord]:
    return [
        UpdateRecord(
            client_id=i,
            round=round_index,
            update_digest=bytes([round_index, i]) * 16,
            reported_l2_norm=0.5 + i,
            validation_accuracy=0.1 * (i + 1),
            credential=f"org-a/client-{i}/token-{i}",
        )
        for i in range(TX_PER_BLOCK)
    ]


@pytest.fixture(scope="module")
def chain() -> Chain:
    chain = Chain.genesis(2)
    for r in range(1, 11):
        chain.mine_next(_records(r), virtual_timestamp_ms=1000 * r)
    return chain


def _block_offsets(chain: Chain) -> list[int]:
    offsets, offset = [], PREAMBLE_SIZE
    for block in chain:
        offsets.append(offset)
        offset += HEADER_SIZE + 4 + RECORD_SIZE * len(block.transactions)
    return offsets


def _flip(data: bytes, bit: int) -> bytes:
    tampered = bytearray(data)
    tampered[bit // 8] ^= 1 << (bit % 8)
    return bytes(tampered)


class TestMining:
    """Tests for proof-of-work nonce search."""

    def test_mined_hash_meets_difficulty(self):
        """Mined headers hash below the target."""
        result = mine_block([], ZERO_HASH, 2, 0, index=0)
        assert result.block.hash.hex().startswith("00")
        assert result.trials == result.block.header.nonce + 1

    def test_difficulty_zero_takes_one_trial(self):
        """Any hash meets difficulty 0."""
        assert mine_block([], ZERO_HASH, 0, 0, index=0).trials == 1

    def test_first_valid_nonce_is_found(self):
        """Sequential search returns the lowest satisfying nonce."""
        result = mine_block([], ZERO_HASH, 1, 0, index=0)
        header = result.block.header
        for nonce in range(header.nonce):
            assert not meets_difficulty(hash_header(header.with_nonce(nonce)), 1)

    def test_mean_trials_at_difficulty_two(self):
        """Trials are geometric with p = 1/256 over distinct headers."""
        trials = [mine_block([], ZERO_HASH, 2, t, index=1).trials for t in range(100)]
        assert 128 <= np.mean(trials) <= 512

    def test_exhausted_nonce_space(self):
        """A tiny nonce budget at high difficulty fails."""
        with pytest.raises(MiningError):
            mine_block([], ZERO_HASH, 16, 0, index=0, max_nonce=10)

    @pytest.mark.parametrize("difficulty", [-1, 65])
    def test_invalid_difficulty(self, difficulty):
        """Difficulty must lie in [0, 64]."""
        with pytest.raises(ContractError):
            mine_block([], ZERO_HASH, difficulty, 0, index=0)

    def test_mining_is_deterministic(self):
        """Same inputs mine the same nonce."""
        a = mine_block(_records(1), ZERO_HASH, 2, 5, index=1)
        b = mine_block(_records(1), ZERO_HASH, 2, 5, index=1)
        assert a.block == b.block


class TestChain:
    """Tests for chain construction and validation."""

    def test_valid_chain(self, chain):
        """A freshly mined chain validates, with and without its tip anchor."""
        assert len(chain) == 11
        assert validate_chain(chain).ok
        assert validate_chain(chain, expected_tip=chain.tip_hash).ok

    def test_genesis_form(self, chain):
        """Genesis has index 0, zero prev hash and no transactions."""
        genesis = chain[0]
        assert genesis.index == 0
        assert genesis.header.prev_hash == ZERO_HASH
        assert genesis.transactions == ()

    def test_append_rejects_foreign_block(self, chain):
        """Blocks must extend the tip."""
        foreign = mine_block([], ZERO_HASH, 2, 0, index=len(chain)).block
        copy = Chain(list(chain))
        with pytest.raises(ContractError):
            copy.append(foreign)

    def test_empty_chain(self):
        """Validating nothing is a domain error."""
        with pytest.raises(DomainError):
            validate_chain([])

    def test_wrong_anchor(self, chain):
        """A mismatched tip anchor is reported at the last block."""
        result = validate_chain(chain, expected_tip=bytes(32))
        assert not result.ok
        assert result.first_invalid_index == len(chain) - 1

    def test_invalid_accuracy_detected(self):
        """Records with accuracy outside [0, 1] invalidate their block."""
        chain = Chain.genesis(0)
        bad = UpdateRecord(0, 1, bytes(32), 1.0, 1.5, "o/s/t")
        chain.mine_next([bad], 1000)
        result = validate_chain(chain)
        assert not result.ok
        assert result.first_invalid_index == 1


class TestTampering:
    """Single bit flips anywhere in the ledger are detected."""

    def test_header_bit_flips(self, chain):
        """Every header bit flip fails validation at the block or its successor."""
        data = encode_ledger(chain)
        anchor = chain.tip_hash
        last = len(chain) - 1
        for position, offset in enumerate(_block_offsets(chain)):
            for bit in range(HEADER_SIZE * 8):
                tampered = decode_ledger(_flip(data, offset * 8 + bit))
                result = validate_chain(tampered, expected_tip=anchor)
                assert not result.ok
                assert result.first_invalid_index in {position, min(position + 1, last)}

    def test_record_bit_flips(self, chain):
        """Flipping a transaction bit is caught at exactly that block."""
        data = encode_ledger(chain)
        regions = []
        for position, offset in enumerate(_block_offsets(chain)):
            start = offset + HEADER_SIZE + 4
            for k in range(len(chain[position].transactions)):
                regions.append((position, start + k * RECORD_SIZE))
        rng = np.random.default_rng(1000)
        for _ in range(1000):
            position, start = regions[int(rng.integers(len(regions)))]
            bit = start * 8 + int(rng.integers(RECORD_SIZE * 8))
            result = validate_chain(decode_ledger(_flip(data, bit)))
            assert not result.ok
            assert result.first_invalid_index == position


class TestLedgerFile:
    """Tests for the on-disk ledger format."""

    def test_file_round_trip(self, chain, tmp_path):
        """Written ledgers read back block for block."""
        path = write_ledger(chain, tmp_path / "ledger.bcfl")
        assert path.read_bytes()[:5] == b"BCFL\x01"
        assert read_ledger(path).blocks == chain.blocks

    def test_size(self, chain):
        """Preamble, headers, counts and records add up."""
        expected = PREAMBLE_SIZE + 11 * (HEADER_SIZE + 4) + 10 * TX_PER_BLOCK * RECORD_SIZE
        assert len(encode_ledger(chain)) == expected

    def test_bad_magic(self, chain):
        """Files must start with the magic."""
        with pytest.raises(LedgerFormatError):
            decode_ledger(b"XXXX" + encode_ledger(chain)[4:])

    def test_bad_version(self, chain):
        """Only version 1 is understood."""
        data = bytearray(encode_ledger(chain))
        data[4] = 2
        with pytest.raises(LedgerFormatError):
            decode_ledger(bytes(data))

    def test_truncated(self, chain):
        """Missing bytes are a format error."""
        with pytest.raises(LedgerFormatError):
            decode_ledger(encode_ledger(chain)[:-1])

    def test_trailing_bytes(self, chain):
        """Extra bytes after the last block are a format error."""
        with pytest.raises(LedgerFormatError):
            decode_ledger(encode_ledger(chain) + b"\x00")
