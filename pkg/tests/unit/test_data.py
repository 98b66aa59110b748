"""Unit tests for seeded substreams and synthetic non-IID data."""

import numpy as np
import pytest
from scipy.stats import entropy

from bcfl.core.data import SyntheticTask, apportion, dataset_digest, make_synthetic_dataset
from bcfl.core.rng import Stream, substream
from bcfl.core.types import ClientDataset, ModelParams, param_dim
from bcfl.errors import ConfigurationError, DomainError, ShapeError


class TestSubstream:
    """Tests for named random substreams."""

    def test_same_inputs_same_draws(self):
        """Equal seed, stream and keys reproduce the same sequence."""
        a = substream(7, Stream.TRAINING, 3, 1).random(5)
        b = substream(7, Stream.TRAINING, 3, 1).random(5)
        np.testing.assert_array_equal(a, b)

    def test_streams_are_independent(self):
        """Different stream names give different draws."""
        a = substream(7, Stream.TRAINING).random(5)
        b = substream(7, Stream.ATTACK).random(5)
        assert not np.array_equal(a, b)

    def test_keys_distinguish_substreams(self):
        """Round and client keys select distinct substreams."""
        a = substream(7, Stream.TRAINING, 1, 2).random(3)
        b = substream(7, Stream.TRAINING, 2, 1).random(3)
        assert not np.array_equal(a, b)

    def test_seed_out_of_range_rejected(self):
        """Seeds must be unsigned 64-bit integers."""
        with pytest.raises(ValueError):
            substream(2**64, Stream.DATA)
        with pytest.raises(ValueError):
            substream(-1, Stream.DATA)


class TestSyntheticDataset:
    """Tests for make_synthetic_dataset."""

    def test_same_seed_byte_identical(self):
        """Same arguments give byte-identical datasets."""
        a = make_synthetic_dataset(11, 4, 0.5, 100, 8, 5)
        b = make_synthetic_dataset(11, 4, 0.5, 100, 8, 5)
        assert dataset_digest(a) == dataset_digest(b)

    def test_different_seed_differs(self):
        """A different seed changes the data."""
        a = make_synthetic_dataset(11, 4, 0.5, 100, 8, 5)
        b = make_synthetic_dataset(12, 4, 0.5, 100, 8, 5)
        assert dataset_digest(a) != dataset_digest(b)

    def test_shapes_and_counts(self):
        """Every client gets exactly samples_per_client rows of input_dim features."""
        datasets = make_synthetic_dataset(3, 5, 1.0, 120, 6, 4)
        assert len(datasets) == 5
        for ds in datasets:
            assert ds.features.shape == (120, 6)
            assert ds.labels.shape == (120,)
            assert ds.label_histogram().sum() == 120

    def test_large_alpha_is_near_uniform(self):
        """alpha = 1e6 gives each client label fractions within 0.05 of 1/2."""
        datasets = make_synthetic_dataset(5, 2, 1e6, 1000, 4, 2)
        for ds in datasets:
            fractions = ds.label_histogram() / ds.n
            np.testing.assert_allclose(fractions, [0.5, 0.5], atol=0.05)

    def test_small_alpha_is_more_skewed(self):
        """Mean KL divergence from uniform is larger at alpha 0.1 than at alpha 10."""

        def mean_kl(alpha: float) -> float:
            datasets = make_synthetic_dataset(17, 4, alpha, 500, 4, 10)
            uniform = np.full(10, 0.1)
            kls = []
            for ds in datasets:
                p = ds.label_histogram() / ds.n
                kls.append(entropy(p + 1e-12, uniform))
            return float(np.mean(kls))

        assert mean_kl(0.1) > mean_kl(10.0)

    def test_non_positive_alpha_rejected(self):
        """alpha must be positive."""
        with pytest.raises(ConfigurationError):
            make_synthetic_dataset(1, 2, 0.0, 10, 2, 2)

    def test_non_positive_samples_rejected(self):
        """samples_per_client must be at least 1."""
        with pytest.raises(ConfigurationError):
            make_synthetic_dataset(1, 2, 1.0, 0, 2, 2)

    def test_single_class_rejected(self):
        """A classification task needs at least two classes."""
        with pytest.raises(ConfigurationError):
            SyntheticTask.generate(1, 4, 1)

    def test_validation_set_is_balanced(self):
        """The shared validation set has equal class counts."""
        task = SyntheticTask.generate(9, 4, 5)
        validation = task.validation_set(500)
        np.testing.assert_array_equal(validation.label_histogram(), [100] * 5)


class TestApportion:
    """Tests for largest-remainder apportionment."""

    def test_counts_sum_to_total(self):
        """Counts always sum to the requested total."""
        rng = np.random.default_rng(0)
        for _ in range(50):
            p = rng.dirichlet(np.ones(7))
            assert apportion(p, 123).sum() == 123

    def test_ties_go_to_lower_index(self):
        """Equal remainders favour the lower index."""
        np.testing.assert_array_equal(apportion(np.array([0.5, 0.5]), 1), [1, 0])


class TestDomainTypes:
    """Tests for model and dataset invariants."""

    def test_param_dim(self):
        """d = input_dim * classes + classes."""
        assert param_dim(16, 10) == 170
        assert ModelParams.zeros(16, 10).dim == 170

    def test_model_rejects_non_finite(self):
        """Model parameters must be finite."""
        weights = np.zeros(param_dim(2, 2))
        weights[0] = np.nan
        with pytest.raises(DomainError):
            ModelParams(weights, 2, 2)

    def test_model_rejects_wrong_length(self):
        """Parameter vector length must match the layout."""
        with pytest.raises(ShapeError):
            ModelParams(np.zeros(5), 2, 2)

    def test_dataset_row_mismatch(self):
        """Feature and label row counts must agree."""
        with pytest.raises(ShapeError):
            ClientDataset(np.zeros((3, 2)), np.zeros(2, dtype=np.int64), 2)

    def test_dataset_label_range(self):
        """Labels must lie in [0, classes)."""
        with pytest.raises(DomainError):
            ClientDataset(np.zeros((2, 2)), np.array([0, 2]), 2)

    def test_pool_concatenates(self):
        """Pooling keeps every sample."""
        datasets = make_synthetic_dataset(2, 3, 1.0, 10, 3, 3)
        pooled = ClientDataset.pool(datasets)
        assert pooled.n == 30
        np.testing.assert_array_equal(pooled.features[:10], datasets[0].features)
