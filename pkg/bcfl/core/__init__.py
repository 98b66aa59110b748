"""Domain types, seed discipline, synthetic data, canonical encodings."""

from bcfl.core.data import SyntheticTask, dataset_digest, make_synthetic_dataset
from bcfl.core.encoding import BlockHeader, UpdateRecord, encode_block_header
from bcfl.core.rng import Stream, substream
from bcfl.core.runlog import RunLog, UpdateLogEntry
from bcfl.core.types import ClientDataset, DelayBreakdown, ModelParams, RoundMetrics

__all__ = [
    "BlockHeader",
    "ClientDataset",
    "DelayBreakdown",
    "ModelParams",
    "RoundMetrics",
    "RunLog",
    "Stream",
    "SyntheticTask",
    "UpdateLogEntry",
    "UpdateRecord",
    "dataset_digest",
    "encode_block_header",
    "make_synthetic_dataset",
    "substream",
]
