"""Local training, evaluation, aggregation and update defenses."""

from bcfl.learning.aggregation import fedavg, foolsgold, krum, krum_scores, multi_krum
from bcfl.learning.compression import SparseUpdate, compress_topk, decompress
from bcfl.learning.model import Evaluation, cross_entropy, evaluate, gradient
from bcfl.learning.privacy import apply_dp, clip_update
from bcfl.learning.training import BATCH_SIZE, local_train
from bcfl.learning.updates import UpdateVector

__all__ = [
    "BATCH_SIZE",
    "Evaluation",
    "SparseUpdate",
    "UpdateVector",
    "apply_dp",
    "clip_update",
    "compress_topk",
    "cross_entropy",
    "decompress",
    "evaluate",
    "fedavg",
    "foolsgold",
    "gradient",
    "krum",
    "krum_scores",
    "local_train",
    "multi_krum",
]
