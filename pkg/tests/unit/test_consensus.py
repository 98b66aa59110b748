"""Unit tests for PoQ, PoFL, PBFT-style voting and PoW outcomes."""

import hashlib
from collections import Counter
from itertools import combinations

import numpy as np
import pytest

from bcfl.consensus import (
    ConsensusCosts,
    ConsensusOutcome,
    pbft_commit,
    pbft_messages,
    pofl_round,
    poq_select,
    pow_outcome,
    select_committee,
)
from bcfl.core.types import ClientDataset, ModelParams
from bcfl.errors import ConfigurationError, ContractError, DomainError, ProtocolError
from bcfl.learning import UpdateVector

COSTS = ConsensusCosts(overhead_s=0.5, message_seconds=0.01, hash_seconds=1e-5, eval_seconds=0.1)


class TestProofOfQuality:
    """Tests for poq_select."""

    def test_highest_accuracy_wins(self):
        """{0.7, 0.9, 0.8} elects node 2 with three messages."""
        outcome = poq_select({1: 0.7, 2: 0.9, 3: 0.8})
        assert outcome.leader == "2"
        assert outcome.committed
        assert outcome.consensus_messages == 3

    def test_ties_go_to_lowest_id(self):
        """Equal accuracies elect the lowest id."""
        assert poq_select({5: 0.9, 3: 0.9, 4: 0.1}).leader == "3"

    def test_delay(self):
        """Delay is Z plus the message cost."""
        outcome = poq_select({1: 0.5, 2: 0.6}, COSTS)
        assert outcome.consensus_virtual_delay == pytest.approx(0.5 + 2 * 0.01)

    def test_empty(self):
        """At least one node must vote."""
        with pytest.raises(DomainError):
            poq_select({})


class TestProofOfFederatedLearning:
    """Tests for pofl_round."""

    @pytest.fixture
    def validation(self):
        features = np.array([[1.0, 0.0], [0.0, 1.0]])
        return ClientDataset(features, np.array([0, 1]), 2)

    def test_best_candidate_wins(self, validation):
        """The candidate that classifies the validation set wins."""
        good = UpdateVector(np.array([1.0, -1.0, -1.0, 1.0, 0.0, 0.0]), 4, 1)
        bad = UpdateVector(np.array([-1.0, 1.0, 1.0, -1.0, 0.0, 0.0]), 2, 1)
        outcome = pofl_round([bad, good], validation, ModelParams.zeros(2, 2), COSTS)
        assert outcome.leader == "4"
        assert outcome.consensus_messages == 2
        assert outcome.consensus_virtual_delay == pytest.approx(0.5 + 2 * 0.01 + 2 * 0.1)

    def test_empty_candidates(self, validation):
        """There must be something to score."""
        with pytest.raises(DomainError):
            pofl_round([], validation, ModelParams.zeros(2, 2))

    def test_missing_validation(self):
        """Scoring needs a validation set."""
        with pytest.raises(DomainError):
            pofl_round([UpdateVector(np.zeros(6), 0, 1)], None, ModelParams.zeros(2, 2))


class TestPBFT:
    """Tests for committee vote counting."""

    proposal = hashlib.sha256(b"proposal").digest()
    other = hashlib.sha256(b"other").digest()

    def test_commits_with_quorum(self):
        """f=1, committee of 4, three matching votes commit with 32 messages."""
        votes = {0: self.proposal, 1: self.proposal, 2: self.proposal, 3: self.other}
        outcome = pbft_commit(self.proposal, [0, 1, 2, 3], votes, 1)
        assert outcome.committed
        assert outcome.consensus_messages == 32
        assert outcome.leader == self.proposal.hex()[:16]

    def test_fails_without_quorum(self):
        """Two matching votes out of four do not commit."""
        votes = {0: self.proposal, 1: self.proposal, 2: self.other, 3: self.other}
        outcome = pbft_commit(self.proposal, [0, 1, 2, 3], votes, 1)
        assert not outcome.committed
        assert outcome.leader == ""

    def test_committee_too_small(self):
        """|C| must be at least 3f + 1."""
        with pytest.raises(ConfigurationError):
            pbft_commit(self.proposal, [0, 1, 2], {}, 1)

    def test_outsider_vote(self):
        """Only members may vote."""
        with pytest.raises(ProtocolError):
            pbft_commit(self.proposal, [0, 1, 2, 3], {9: self.proposal}, 1)

    def test_message_count(self):
        """Messages grow as 2 |C|^2."""
        assert [pbft_messages(c) for c in (1, 4, 7)] == [2, 32, 98]

    def test_select_committee(self):
        """Committees are sorted samples without replacement."""
        committee = select_committee(list(range(10)), 4, np.random.default_rng(3))
        assert committee == sorted(committee)
        assert len(set(committee)) == 4

    def test_committee_pairs_uniform(self):
        """Every pair of nodes sits together equally often across 10^4 draws."""
        draws, rng = 10_000, np.random.default_rng(11)
        pairs = Counter()
        for _ in range(draws):
            pairs.update(combinations(select_committee(list(range(10)), 4, rng), 2))
        p = 6 / 45  # pairs per committee over all pairs
        mean, sd = draws * p, np.sqrt(draws * p * (1 - p))
        assert len(pairs) == 45
        # 5 sd keeps the 45 simultaneous checks tight
        assert all(abs(count - mean) < 5 * sd for count in pairs.values())

    def test_select_committee_too_large(self):
        """A committee cannot outnumber the nodes."""
        with pytest.raises(ConfigurationError):
            select_committee([0, 1], 3, np.random.default_rng(0))


class TestProofOfWork:
    """Tests for the PoW outcome."""

    def test_delay_includes_hashing(self):
        """Delay is Z plus broadcast plus hashing time."""
        outcome = pow_outcome("cloud", 1000, 8, COSTS)
        assert outcome.leader == "cloud"
        assert outcome.consensus_virtual_delay == pytest.approx(0.5 + 8 * 0.01 + 1000 * 1e-5)


class TestOutcome:
    """Tests for outcome invariants."""

    def test_committed_needs_leader(self):
        """A committed outcome names who won."""
        with pytest.raises(ContractError):
            ConsensusOutcome("", True, 0, 0.0)

    def test_negative_costs(self):
        """Costs are non-negative."""
        with pytest.raises(ContractError):
            ConsensusCosts(overhead_s=-1.0)
