"""Model update vectors exchanged between clients and aggregators."""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from bcfl.core.encoding import update_digest
from bcfl.errors import DomainError


@dataclass(frozen=True)
class UpdateVector:
    """Client model minus received global model.

    ``l2_norm`` is computed on construction and cached.
    """

    delta: NDArray[np.float64]
    client_id: int
    round: int
    l2_norm: float = field(init=False)

    def __post_init__(self) -> None:
        delta = np.array(self.delta, dtype=np.float64)
        if delta.ndim != 1:
            raise DomainError("update delta must be a vector")
        if not np.all(np.isfinite(delta)):
            raise DomainError(f"update of client {self.client_id} has non-finite entries")
        delta.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "l2_norm", float(np.linalg.norm(delta)))

    @property
    def dim(self) -> int:
        return self.delta.shape[0]

    def replace_delta(self, delta: NDArray[np.float64]) -> "UpdateVector":
        """Same client and round, new delta."""
        return UpdateVector(delta, self.client_id, self.round)

    def digest(self) -> bytes:
        """SHA-256 of the canonical encoding."""
        return update_digest(self.client_id, self.round, self.delta)
