"""Client-side mini-batch SGD."""

import numpy as np

from bcfl.core.types import ClientDataset, ModelParams
from bcfl.errors import ContractError, ShapeError
from bcfl.learning.model import gradient
from bcfl.learning.updates import UpdateVector

BATCH_SIZE = 32


def local_train(
    global_model: ModelParams,
    data: ClientDataset,
    epochs: int,
    lr: float,
    rng: np.random.Generator,
    client_id: int = 0,
    round_index: int = 0,
) -> UpdateVector:
    """Train a copy of the global model on local data.

    Mini-batch SGD with batch size 32; the sample order is reshuffled from
    ``rng`` at the start of every epoch.

    Args:
        global_model: Model received from the aggregator
        data: Client's private dataset
        epochs: Number of passes over the data (>= 1)
        lr: Learning rate (> 0)
        rng: Training substream of this client and round
        client_id: Identifier stamped on the update
        round_index: Round stamped on the update

    Returns:
        Trained model minus global model

    Raises:
        ContractError: If lr <= 0 or epochs < 1
        ShapeError: If data and model dimensions disagree
    """
    if lr <= 0:
        raise ContractError(f"learning rate must be positive, got {lr}")
    if epochs < 1:
        raise ContractError(f"epochs must be >= 1, got {epochs}")
    if data.input_dim != global_model.input_dim or data.classes != global_model.classes:
        raise ShapeError(
            f"data ({data.input_dim} features, {data.classes} classes) does not match model "
            f"({global_model.input_dim} features, {global_model.classes} classes)"
        )

    weights = global_model.weights.copy()
    for _ in range(epochs):
        order = rng.permutation(data.n)
        for start in range(0, data.n, BATCH_SIZE):
            batch = order[start : start + BATCH_SIZE]
            current = ModelParams(weights, global_model.input_dim, global_model.classes)
            weights = weights - lr * gradient(current, data.features[batch], data.labels[batch])

    return UpdateVector(weights - global_model.weights, client_id, round_index)
