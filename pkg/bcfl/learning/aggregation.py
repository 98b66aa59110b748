"""Aggregation rules and Byzantine/Sybil defenses.

All rules consume updates in the order given; callers sort by client id so
results do not depend on arrival order.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import cdist, pdist, squareform

from bcfl.errors import ConfigurationError, ContractError, ShapeError
from bcfl.learning.updates import UpdateVector

logger = logging.getLogger(__name__)

WEIGHT_SUM_TOLERANCE = 1e-9


def _stack(updates: Sequence[UpdateVector]) -> NDArray[np.float64]:
    dims = {u.dim for u in updates}
    if len(dims) != 1:
        raise ShapeError(f"updates have differing dimensions {sorted(dims)}")
    return np.vstack([u.delta for u in updates])


def fedavg(updates: Sequence[UpdateVector], weights: Sequence[float]) -> NDArray[np.float64]:
    """Weighted arithmetic mean of update deltas.

    Raises:
        ContractError: If the weights are negative, do not match the updates,
            or do not sum to 1 within 1e-9
    """
    if not updates:
        raise ContractError("fedavg needs at least one update")
    if len(weights) != len(updates):
        raise ContractError(f"{len(updates)} updates but {len(weights)} weights")
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w < 0):
        raise ContractError("aggregation weights must be non-negative")
    total = math.fsum(w)
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise ContractError(f"aggregation weights sum to {total!r}, expected 1")
    return w @ _stack(updates)


def krum_scores(updates: Sequence[UpdateVector], f: int) -> NDArray[np.float64]:
    """Sum of squared distances from each update to its n - f - 2 nearest others."""
    n = len(updates)
    if f < 0:
        raise ConfigurationError(f"krum f must be non-negative, got {f}")
    if n < f + 3:
        raise ConfigurationError(f"krum with f={f} needs at least {f + 3} updates, got {n}")
    distances = squareform(pdist(_stack(updates), metric="sqeuclidean"))
    np.fill_diagonal(distances, np.inf)
    nearest = np.sort(distances, axis=1)[:, : n - f - 2]
    return nearest.sum(axis=1)


def multi_krum(updates: Sequence[UpdateVector], f: int, m: int) -> list[UpdateVector]:
    """The m updates with the lowest Krum scores, best first.

    Ties are broken by lowest client id.
    """
    if not 1 <= m <= len(updates):
        raise ConfigurationError(f"multi-krum selection m={m} outside [1, {len(updates)}]")
    scores = krum_scores(updates, f)
    ids = np.array([u.client_id for u in updates])
    order = np.lexsort((ids, scores))
    return [updates[i] for i in order[:m]]


def krum(updates: Sequence[UpdateVector], f: int) -> UpdateVector:
    """Select the single update closest to its n - f - 2 nearest neighbours.

    Raises:
        ConfigurationError: If fewer than f + 3 updates are given
    """
    return multi_krum(updates, f, 1)[0]


def foolsgold(histories: Sequence[NDArray[np.float64]]) -> NDArray[np.float64]:
    """Per-client weights in [0, 1] penalizing mutually similar histories.

    ``histories[i]`` is the cumulative update of client i. Pairwise cosine
    similarities are re-scaled so that a client whose own maximum similarity
    is lower than a partner's is pardoned proportionally; the weight is
    ``1 - max_j cs(i, j)`` clipped to [0, 1], with no further rescaling.
    Zero-norm histories carry no evidence and get weight 1.
    """
    n = len(histories)
    if n == 0:
        return np.zeros(0)
    matrix = np.vstack([np.asarray(h, dtype=np.float64) for h in histories])
    active = np.flatnonzero(np.linalg.norm(matrix, axis=1) > 0)
    weights = np.ones(n)
    if active.size < 2:
        return weights

    cs = 1.0 - cdist(matrix[active], matrix[active], metric="cosine")
    np.fill_diagonal(cs, -np.inf)
    max_cs = cs.max(axis=1)
    k = active.size
    for i in range(k):
        for j in range(k):
            if i != j and 0 < max_cs[i] < max_cs[j]:
                cs[i, j] *= max_cs[i] / max_cs[j]

    weights[active] = np.clip(1.0 - cs.max(axis=1), 0.0, 1.0)
    return weights
