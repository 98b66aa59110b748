"""Shared domain types."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from bcfl.errors import DomainError, ShapeError


@dataclass(frozen=True)
class ModelParams:
    """Parameters of a softmax linear classifier.

    Layout: ``input_dim * classes`` weights (row-major, shape
    ``(input_dim, classes)``) followed by ``classes`` biases.
    """

    weights: NDArray[np.float64]
    input_dim: int
    classes: int

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.shape[0] != param_dim(self.input_dim, self.classes):
            raise ShapeError(
                f"expected {param_dim(self.input_dim, self.classes)} parameters, "
                f"got shape {w.shape}"
            )
        if not np.all(np.isfinite(w)):
            raise DomainError("model parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def zeros(cls, input_dim: int, classes: int) -> "ModelParams":
        """Zero-initialized model."""
        return cls(np.zeros(param_dim(input_dim, classes)), input_dim, classes)

    @property
    def dim(self) -> int:
        """Parameter vector length d."""
        return self.weights.shape[0]

    @property
    def matrix(self) -> NDArray[np.float64]:
        """Weight matrix view, shape (input_dim, classes)."""
        return self.weights[: self.input_dim * self.classes].reshape(
            self.input_dim, self.classes
        )

    @property
    def bias(self) -> NDArray[np.float64]:
        """Bias view, shape (classes,)."""
        return self.weights[self.input_dim * self.classes :]

    def apply(self, delta: NDArray[np.float64]) -> "ModelParams":
        """Return ``self + delta`` as a new model."""
        if delta.shape != self.weights.shape:
            raise ShapeError(f"delta shape {delta.shape} != model shape {self.weights.shape}")
        return ModelParams(self.weights + delta, self.input_dim, self.classes)


def param_dim(input_dim: int, classes: int) -> int:
    """d = input_dim * classes + classes."""
    return input_dim * classes + classes


@dataclass(frozen=True)
class ClientDataset:
    """Labelled feature matrix held by one client."""

    features: NDArray[np.float64]
    labels: NDArray[np.int64]
    classes: int

    def __post_init__(self) -> None:
        if self.features.ndim != 2:
            raise ShapeError("features must be a 2-D matrix")
        if self.labels.ndim != 1 or self.labels.shape[0] != self.features.shape[0]:
            raise ShapeError(
                f"{self.features.shape[0]} feature rows but {self.labels.shape[0]} labels"
            )
        if self.features.shape[0] < 1:
            raise DomainError("dataset must contain at least one sample")
        if np.any(self.labels < 0) or np.any(self.labels >= self.classes):
            raise DomainError(f"labels must lie in [0, {self.classes})")

    @property
    def n(self) -> int:
        """Number of samples."""
        return self.features.shape[0]

    @property
    def input_dim(self) -> int:
        """Feature dimension."""
        return self.features.shape[1]

    def label_histogram(self) -> NDArray[np.int64]:
        """Count of samples per class."""
        return np.bincount(self.labels, minlength=self.classes)

    @staticmethod
    def pool(datasets: "list[ClientDataset]") -> "ClientDataset":
        """Concatenate datasets (used by centralized training)."""
        if not datasets:
            raise DomainError("cannot pool an empty list of datasets")
        return ClientDataset(
            features=np.concatenate([d.features for d in datasets]),
            labels=np.concatenate([d.labels for d in datasets]),
            classes=datasets[0].classes,
        )


@dataclass(frozen=True)
class DelayBreakdown:
    """Per-tier delay of one round.

    cve: client tier (task execution, local training, upload)
    bve: blockchain/fog tier (relay aggregation, consensus)
    kve: cloud tier (root aggregation, global model download)
    """

    cve: float = 0.0
    bve: float = 0.0
    kve: float = 0.0

    def __post_init__(self) -> None:
        if min(self.cve, self.bve, self.kve) < 0:
            raise DomainError("delay components must be non-negative")

    def __add__(self, other: "DelayBreakdown") -> "DelayBreakdown":
        return DelayBreakdown(self.cve + other.cve, self.bve + other.bve, self.kve + other.kve)

    @property
    def total(self) -> float:
        """Total-Delay = cve + bve + kve."""
        return self.cve + self.bve + self.kve


@dataclass(frozen=True)
class RoundMetrics:
    """Metrics of one FL round; one CSV row."""

    round: int
    global_accuracy: float
    delay: DelayBreakdown
    messages_root: int
    messages_total: int
    blocks_mined: int
    updates_rejected: int
    reward: float
    rolled_back: bool = False
    leader: str = ""

    def __post_init__(self) -> None:
        if not 0.0 <= self.global_accuracy <= 1.0:
            raise DomainError(f"accuracy {self.global_accuracy} outside [0, 1]")
        counts = (self.messages_root, self.messages_total, self.blocks_mined, self.updates_rejected)
        if min(counts) < 0:
            raise DomainError("round counts must be non-negative")
