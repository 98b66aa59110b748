"""Softmax linear classifier: loss, analytic gradient, evaluation."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import log_softmax, softmax

from bcfl.core.types import ClientDataset, ModelParams
from bcfl.errors import DomainError, ShapeError


@dataclass(frozen=True)
class Evaluation:
    """Accuracy and mean cross-entropy of a model on a dataset."""

    accuracy: float
    loss: float


def _check_shapes(model: ModelParams, features: NDArray[np.float64]) -> None:
    if features.ndim != 2 or features.shape[1] != model.input_dim:
        raise ShapeError(
            f"features of shape {features.shape} incompatible with input_dim {model.input_dim}"
        )


def logits(model: ModelParams, features: NDArray[np.float64]) -> NDArray[np.float64]:
    """Class scores X W + b."""
    _check_shapes(model, features)
    return features @ model.matrix + model.bias


def cross_entropy(
    model: ModelParams,
    features: NDArray[np.float64],
    labels: NDArray[np.int64],
) -> float:
    """Mean cross-entropy loss."""
    if features.shape[0] == 0:
        raise DomainError("cannot compute loss on an empty batch")
    log_p = log_softmax(logits(model, features), axis=1)
    return float(-np.mean(log_p[np.arange(labels.shape[0]), labels]))


def gradient(
    model: ModelParams,
    features: NDArray[np.float64],
    labels: NDArray[np.int64],
) -> NDArray[np.float64]:
    """Exact gradient of the mean cross-entropy, in the model's parameter layout.

    Raises:
        DomainError: If the batch is empty
        ShapeError: If feature width does not match the model
    """
    m = features.shape[0]
    if m == 0:
        raise DomainError("gradient of an empty batch is undefined")
    if labels.shape[0] != m:
        raise ShapeError(f"{m} feature rows but {labels.shape[0]} labels")
    probs = softmax(logits(model, features), axis=1)
    probs[np.arange(m), labels] -= 1.0
    probs /= m
    grad_w = features.T @ probs
    grad_b = probs.sum(axis=0)
    return np.concatenate([grad_w.ravel(), grad_b])


def evaluate(model: ModelParams, data: ClientDataset) -> Evaluation:
    """Argmax accuracy (ties to the lowest class index) and mean cross-entropy."""
    if data.n == 0:
        raise DomainError("cannot evaluate on an empty dataset")
    scores = logits(model, data.features)
    predicted = np.argmax(scores, axis=1)
    accuracy = float(np.mean(predicted == data.labels))
    loss = float(-np.mean(log_softmax(scores, axis=1)[np.arange(data.n), data.labels]))
    return Evaluation(accuracy=accuracy, loss=loss)
