"""Synthetic non-IID classification data.

Each class c is an isotropic unit-covariance Gaussian around a mean drawn
once from the data substream. Client label mixes are drawn from a symmetric
Dirichlet(alpha); small alpha gives strongly skewed clients, large alpha
approaches the uniform prior.
"""

import hashlib
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from bcfl.core.rng import Stream, substream
from bcfl.core.types import ClientDataset
from bcfl.errors import ConfigurationError


@dataclass(frozen=True)
class SyntheticTask:
    """Gaussian-mixture task shared by all clients of a scenario.

    Attributes:
        seed: Scenario seed
        class_means: Matrix (classes, input_dim) of class centres
    """

    seed: int
    class_means: NDArray[np.float64]

    @classmethod
    def generate(
        cls,
        seed: int,
        input_dim: int,
        classes: int,
        mean_scale: float = 1.0,
    ) -> "SyntheticTask":
        """Draw class means from the data substream.

        Raises:
            ConfigurationError: If classes < 2 or input_dim < 1
        """
        if classes < 2:
            raise ConfigurationError(f"classes must be >= 2, got {classes}")
        if input_dim < 1:
            raise ConfigurationError(f"input_dim must be >= 1, got {input_dim}")
        if mean_scale <= 0:
            raise ConfigurationError(f"mean_scale must be positive, got {mean_scale}")
        rng = substream(seed, Stream.DATA)
        means = rng.normal(0.0, mean_scale, size=(classes, input_dim))
        return cls(seed=seed, class_means=means)

    @property
    def classes(self) -> int:
        return self.class_means.shape[0]

    @property
    def input_dim(self) -> int:
        return self.class_means.shape[1]

    def sample(self, labels: NDArray[np.int64], rng: np.random.Generator) -> ClientDataset:
        """Draw features for the given labels."""
        noise = rng.standard_normal(size=(labels.shape[0], self.input_dim))
        return ClientDataset(
            features=self.class_means[labels] + noise,
            labels=labels.astype(np.int64),
            classes=self.classes,
        )

    def client_datasets(
        self,
        n_clients: int,
        dirichlet_alpha: float,
        samples_per_client: int,
    ) -> list[ClientDataset]:
        """Partition-by-label client datasets.

        Client i draws label proportions p_i ~ Dir(alpha) and receives
        per-class counts apportioned from ``p_i * samples_per_client`` by the
        largest-remainder rule (ties to the lower class index).
        """
        if dirichlet_alpha <= 0:
            raise ConfigurationError(f"dirichlet_alpha must be positive, got {dirichlet_alpha}")
        if samples_per_client < 1:
            raise ConfigurationError(
                f"samples_per_client must be >= 1, got {samples_per_client}"
            )
        if n_clients < 1:
            raise ConfigurationError(f"n_clients must be >= 1, got {n_clients}")

        datasets = []
        for client in range(n_clients):
            rng = substream(self.seed, Stream.DATA, 1, client)
            proportions = rng.dirichlet(np.full(self.classes, dirichlet_alpha))
            counts = apportion(proportions, samples_per_client)
            labels = np.repeat(np.arange(self.classes), counts)
            labels = rng.permutation(labels)
            datasets.append(self.sample(labels, rng))
        return datasets

    def validation_set(self, n_samples: int) -> ClientDataset:
        """Class-balanced held-out set from its own substream."""
        if n_samples < 1:
            raise ConfigurationError(f"validation_samples must be >= 1, got {n_samples}")
        rng = substream(self.seed, Stream.VALIDATION)
        labels = np.arange(n_samples, dtype=np.int64) % self.classes
        return self.sample(rng.permutation(labels), rng)


def apportion(proportions: NDArray[np.float64], total: int) -> NDArray[np.int64]:
    """Integer counts summing to ``total`` by the largest-remainder rule."""
    raw = proportions * total
    counts = np.floor(raw).astype(np.int64)
    remainder = total - int(counts.sum())
    if remainder > 0:
        # stable sort keeps lower index first among equal fractional parts
        order = np.argsort(-(raw - counts), kind="stable")
        counts[order[:remainder]] += 1
    return counts


def make_synthetic_dataset(
    seed: int,
    n_clients: int,
    dirichlet_alpha: float,
    samples_per_client: int,
    input_dim: int,
    classes: int,
    mean_scale: float = 1.0,
) -> list[ClientDataset]:
    """Generate per-client non-IID datasets; a pure function of its arguments."""
    task = SyntheticTask.generate(seed, input_dim, classes, mean_scale)
    return task.client_datasets(n_clients, dirichlet_alpha, samples_per_client)


def dataset_digest(datasets: list[ClientDataset]) -> str:
    """SHA-256 hex digest over the canonical bytes of a list of datasets."""
    h = hashlib.sha256()
    for ds in datasets:
        h.update(np.ascontiguousarray(ds.features, dtype="<f8").tobytes())
        h.update(np.ascontiguousarray(ds.labels, dtype="<i8").tobytes())
    return h.hexdigest()
