"""Top-k sparsification of updates."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from bcfl.errors import ConfigurationError, ShapeError
from bcfl.learning.updates import UpdateVector


@dataclass(frozen=True)
class SparseUpdate:
    """Coordinates kept by top-k compression.

    Attributes:
        indices: Strictly increasing positions in [0, original_dim)
        values: Values at those positions
        original_dim: Length d of the dense vector
    """

    indices: NDArray[np.int64]
    values: NDArray[np.float64]
    original_dim: int

    def __post_init__(self) -> None:
        if self.indices.shape != self.values.shape:
            raise ShapeError("indices and values must have equal length")
        if self.indices.shape[0] > self.original_dim:
            raise ShapeError("more kept coordinates than the dense dimension")
        if self.indices.size and (
            self.indices[0] < 0
            or self.indices[-1] >= self.original_dim
            or np.any(np.diff(self.indices) <= 0)
        ):
            raise ShapeError("indices must be strictly increasing within [0, original_dim)")

    @property
    def nnz(self) -> int:
        return int(self.indices.shape[0])


def compress_topk(update: UpdateVector, k: int) -> SparseUpdate:
    """Keep the k largest-magnitude coordinates, ties going to the lower index.

    Raises:
        ConfigurationError: If k is outside [1, d]
    """
    d = update.dim
    if not 1 <= k <= d:
        raise ConfigurationError(f"top-k k={k} outside [1, {d}]")
    # lexsort: last key is primary
    order = np.lexsort((np.arange(d), -np.abs(update.delta)))
    kept = np.sort(order[:k]).astype(np.int64)
    return SparseUpdate(kept, update.delta[kept].copy(), d)


def decompress(sparse: SparseUpdate) -> NDArray[np.float64]:
    """Dense vector with zeros outside the kept coordinates."""
    dense = np.zeros(sparse.original_dim)
    dense[sparse.indices] = sparse.values
    return dense
