"""Model poisoning and Sybil identities."""

import logging

import numpy as np

from bcfl.config import MAX_CLIENTS, AttackConfig, NoiseAttack, SignFlipAttack, SybilAttack
from bcfl.errors import ContractError
from bcfl.learning.updates import UpdateVector

logger = logging.getLogger(__name__)

SYBIL_ID_BASE = MAX_CLIENTS


def is_synthetic_id(client_id: int) -> bool:
    """Sybil identities live above every real client id."""
    return client_id >= SYBIL_ID_BASE


def poison(
    update: UpdateVector,
    attack: AttackConfig | SignFlipAttack | NoiseAttack,
    rng: np.random.Generator,
) -> UpdateVector:
    """Corrupt one update.

    sign_flip: delta <- -scale * delta
    noise: delta <- delta + N(0, sigma^2) per coordinate

    Raises:
        ContractError: If given a sybil attack
    """
    kind = attack.kind if isinstance(attack, AttackConfig) else attack
    match kind:
        case SignFlipAttack(scale=scale):
            return update.replace_delta(-scale * update.delta)
        case NoiseAttack(sigma=sigma):
            if sigma == 0:
                return update
            return update.replace_delta(update.delta + rng.normal(0.0, sigma, size=update.dim))
        case SybilAttack():
            raise ContractError("sybil attacks spawn identities; they do not poison updates")
    raise ContractError(f"unknown attack {kind!r}")


def spawn_sybils(
    base: UpdateVector,
    clones: int,
    jitter_sigma: float,
    rng: np.random.Generator,
    first_id: int = SYBIL_ID_BASE,
) -> list[UpdateVector]:
    """Near-identical copies of ``base`` under fresh synthetic ids.

    Raises:
        ContractError: If clones < 1, jitter is negative or ``first_id`` is
            not a synthetic id
    """
    if clones < 1:
        raise ContractError(f"clones must be >= 1, got {clones}")
    if jitter_sigma < 0:
        raise ContractError(f"jitter_sigma must be non-negative, got {jitter_sigma}")
    if not is_synthetic_id(first_id):
        raise ContractError(f"sybil ids must start at or above {SYBIL_ID_BASE}")
    sybils = []
    for offset in range(clones):
        delta = base.delta.copy()
        if jitter_sigma > 0:
            delta = delta + rng.normal(0.0, jitter_sigma, size=base.dim)
        sybils.append(UpdateVector(delta, first_id + offset, base.round))
    logger.info(
        "round %d: spawned %d synthetic identities %d..%d",
        base.round,
        clones,
        first_id,
        first_id + clones - 1,
    )
    return sybils
