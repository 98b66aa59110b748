"""Gaussian mechanism on model updates."""

import numpy as np

from bcfl.errors import ContractError
from bcfl.learning.updates import UpdateVector


def clip_update(update: UpdateVector, clip: float) -> UpdateVector:
    """Scale the delta by min(1, clip / ||delta||)."""
    if clip <= 0:
        raise ContractError(f"clip must be positive, got {clip}")
    if update.l2_norm <= clip:
        return update
    return update.replace_delta(update.delta * (clip / update.l2_norm))


def apply_dp(
    update: UpdateVector,
    clip: float,
    sigma: float,
    rng: np.random.Generator,
) -> UpdateVector:
    """Clip the update norm, then add N(0, (sigma * clip)^2) to every coordinate.

    Raises:
        ContractError: If clip <= 0 or sigma < 0
    """
    if sigma < 0:
        raise ContractError(f"sigma must be non-negative, got {sigma}")
    clipped = clip_update(update, clip)
    if sigma == 0:
        return clipped
    noise = rng.normal(0.0, sigma * clip, size=clipped.dim)
    return clipped.replace_delta(clipped.delta + noise)
