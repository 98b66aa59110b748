"""Unit tests for FedAvg, (Multi-)Krum and FoolsGold."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcfl.adversary import poison
from bcfl.config import SignFlipAttack
from bcfl.core.data import make_synthetic_dataset
from bcfl.core.rng import Stream, substream
from bcfl.core.types import ModelParams
from bcfl.errors import ConfigurationError, ContractError
from bcfl.learning import (
    UpdateVector,
    fedavg,
    foolsgold,
    krum,
    krum_scores,
    local_train,
    multi_krum,
)


def _vec(values, client_id=0):
    return UpdateVector(np.asarray(values, dtype=np.float64), client_id, 1)


def _brute_force_scores(updates, f):
    scores = []
    for a in updates:
        distances = sorted(
            float(np.sum((a.delta - b.delta) ** 2)) for b in updates if b.client_id != a.client_id
        )
        scores.append(sum(distances[: len(updates) - f - 2]))
    return scores


class TestFedAvg:
    """Tests for the weighted mean."""

    def test_worked_example(self):
        """[1,0], [0,1] with equal weights give [0.5, 0.5]."""
        result = fedavg([_vec([1, 0]), _vec([0, 1], 1)], [0.5, 0.5])
        np.testing.assert_allclose(result, [0.5, 0.5])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=2**32))
    def test_uniform_weights_equal_mean(self, n, seed):
        """Uniform weights reproduce the arithmetic mean."""
        rng = np.random.default_rng(seed)
        vectors = rng.normal(size=(n, 6))
        result = fedavg([_vec(v, i) for i, v in enumerate(vectors)], [1 / n] * n)
        np.testing.assert_allclose(result, vectors.mean(axis=0), atol=1e-12)

    def test_weights_must_sum_to_one(self):
        """Weights off by more than 1e-9 are rejected."""
        with pytest.raises(ContractError):
            fedavg([_vec([1.0]), _vec([2.0], 1)], [0.5, 0.6])

    def test_negative_weight_rejected(self):
        """Weights must be non-negative."""
        with pytest.raises(ContractError):
            fedavg([_vec([1.0]), _vec([2.0], 1)], [1.5, -0.5])

    def test_empty_rejected(self):
        """At least one update is needed."""
        with pytest.raises(ContractError):
            fedavg([], [])

    def test_count_mismatch_rejected(self):
        """One weight per update."""
        with pytest.raises(ContractError):
            fedavg([_vec([1.0])], [0.5, 0.5])


class TestKrum:
    """Tests for Krum selection."""

    def test_outlier_not_selected(self):
        """Five clustered updates and one far outlier: the outlier is never chosen."""
        rng = np.random.default_rng(3)
        updates = [_vec(rng.normal(0, 0.01, 4), i) for i in range(5)]
        updates.append(_vec(np.full(4, 100.0), 5))
        assert krum(updates, 1).client_id != 5
        assert 5 not in {u.client_id for u in multi_krum(updates, 1, 4)}

    def test_scores_use_nearest_neighbours(self):
        """Score sums the n - f - 2 smallest squared distances."""
        updates = [_vec([0.0], 0), _vec([1.0], 1), _vec([3.0], 2)]
        np.testing.assert_allclose(krum_scores(updates, 0), [1.0, 1.0, 4.0])

    def test_ties_broken_by_lowest_id(self):
        """Equal scores select the lowest client id."""
        updates = [_vec([0.0], 9), _vec([0.0], 4), _vec([0.0], 7)]
        assert krum(updates, 0).client_id == 4

    def test_too_few_updates(self):
        """n must be at least f + 3."""
        with pytest.raises(ConfigurationError):
            krum([_vec([0.0], i) for i in range(4)], 2)

    def test_select_out_of_range(self):
        """Multi-Krum m must lie in [1, n]."""
        with pytest.raises(ConfigurationError):
            multi_krum([_vec([0.0], i) for i in range(4)], 0, 5)

    def test_sign_flip_attackers_never_selected(self):
        """n=8, f=2 with two sign-flipped (scale 10) trained updates: Krum picks honest."""
        datasets = make_synthetic_dataset(7, 8, 0.5, 64, 8, 5)
        model = ModelParams.zeros(8, 5)
        attack = SignFlipAttack(scale=10.0)
        for seed in range(100):
            updates = [
                local_train(model, ds, 1, 0.05, substream(seed, Stream.TRAINING, 1, i), i, 1)
                for i, ds in enumerate(datasets)
            ]
            malicious = {int(i) for i in substream(seed, Stream.ATTACK).choice(8, 2, False)}
            rng = substream(seed, Stream.ATTACK, 1)
            updates = [poison(u, attack, rng) if u.client_id in malicious else u for u in updates]
            assert krum(updates, 2).client_id not in malicious
            np.testing.assert_allclose(krum_scores(updates, 2), _brute_force_scores(updates, 2))


class TestFoolsGold:
    """Tests for similarity-based down-weighting."""

    def test_identical_pair_gets_zero(self):
        """Two identical histories both get weight 0."""
        weights = foolsgold([np.array([1.0, 0.0]), np.array([1.0, 0.0])])
        np.testing.assert_allclose(weights, [0.0, 0.0])

    def test_orthogonal_pair_gets_one(self):
        """Orthogonal histories keep full weight."""
        weights = foolsgold([np.array([1.0, 0.0]), np.array([0.0, 1.0])])
        np.testing.assert_allclose(weights, [1.0, 1.0])

    def test_clones_down_weighted_below_honest(self):
        """Near-identical sybils score lower than diverse honest clients."""
        rng = np.random.default_rng(0)
        honest = [rng.normal(size=20) for _ in range(4)]
        base = rng.normal(size=20)
        clones = [base + rng.normal(0, 1e-3, 20) for _ in range(3)]
        weights = foolsgold(honest + clones)
        assert weights[4:].max() < weights[:4].min()
        assert np.all((weights >= 0) & (weights <= 1))

    def test_clone_pair_weight_share(self):
        """A two-clone pair keeps under a tenth of the total weight."""
        rng = np.random.default_rng(3)
        honest = [rng.normal(size=20) for _ in range(6)]
        base = rng.normal(size=20)
        pair = [base, base + rng.normal(0, 1e-4, 20)]
        weights = foolsgold(honest + pair)
        assert weights[6:].sum() / weights.sum() < 0.1

    def test_empty_and_single(self):
        """No histories give no weights; a lone client keeps weight 1."""
        assert foolsgold([]).shape == (0,)
        np.testing.assert_allclose(foolsgold([np.array([1.0, 0.0])]), [1.0])

    def test_zero_history_keeps_weight(self):
        """A client without history carries no similarity evidence."""
        weights = foolsgold([np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0])])
        assert weights[0] == 1.0

    def test_uniform_half_similarity_gives_half_weight(self):
        """Three unit histories with pairwise cosine 0.5 each get weight 0.5."""
        histories = [
            np.array([1.0, 0.0, 0.0]),
            np.array([0.5, np.sqrt(3) / 2, 0.0]),
            np.array([0.5, np.sqrt(3) / 6, np.sqrt(6) / 3]),
        ]
        np.testing.assert_allclose(foolsgold(histories), [0.5, 0.5, 0.5], atol=1e-12)

    def test_orthogonal_honest_with_identical_sybils(self):
        """Four orthogonal honest clients keep weight 1; two identical sybils get 0."""
        eye = np.eye(6)
        sybil = eye[4] + eye[5]
        weights = foolsgold([eye[0], eye[1], eye[2], eye[3], sybil, sybil.copy()])
        np.testing.assert_allclose(weights[:4], 1.0, atol=1e-12)
        np.testing.assert_allclose(weights[4:], 0.0, atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=2**32))
    def test_permutation_equivariant(self, n, seed):
        """Reordering clients reorders their weights and nothing else."""
        rng = np.random.default_rng(seed)
        histories = [rng.normal(size=5) for _ in range(n)]
        order = rng.permutation(n)
        weights = foolsgold(histories)
        permuted = foolsgold([histories[i] for i in order])
        np.testing.assert_allclose(permuted, weights[order], atol=1e-12)
