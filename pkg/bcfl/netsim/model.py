"""Delay model: execution and transmission times of the three-tier network.

per-task delay = cycles / cpu_rate + size / bandwidth + propagation
Total-Delay    = cve + bve + kve
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum

from bcfl.core.types import DelayBreakdown
from bcfl.errors import ContractError


class Tier(StrEnum):
    CLIENT = "client"
    FOG = "fog"
    CLOUD = "cloud"


@dataclass(frozen=True)
class Link:
    """Point-to-point link.

    Attributes:
        bandwidth: bits per second (> 0)
        propagation: seconds (>= 0)
    """

    bandwidth: float
    propagation: float = 0.0

    def __post_init__(self) -> None:
        if self.bandwidth <= 0:
            raise ContractError(f"bandwidth must be positive, got {self.bandwidth}")
        if self.propagation < 0:
            raise ContractError(f"propagation must be non-negative, got {self.propagation}")


@dataclass(frozen=True)
class NodeResource:
    """Compute node of any tier."""

    node_id: str
    tier: Tier
    cpu_rate: float  # [cycles/s]
    links: Mapping[str, Link] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.cpu_rate <= 0:
            raise ContractError(f"cpu_rate of {self.node_id} must be positive")


@dataclass(frozen=True)
class SensingTask:
    """Sensing workload produced by a client, processed where it is assigned."""

    origin_client: int
    size_bits: float
    cycles_required: float
    assignment: str = ""

    def __post_init__(self) -> None:
        if self.size_bits <= 0 or self.cycles_required <= 0:
            raise ContractError("task size and cycles must be positive")

    def assign(self, node_id: str) -> "SensingTask":
        return SensingTask(self.origin_client, self.size_bits, self.cycles_required, node_id)


def exec_delay(task: SensingTask, node: NodeResource) -> float:
    """cycles_required / cpu_rate.

    Raises:
        ContractError: If the task is not assigned to ``node``
    """
    if task.assignment != node.node_id:
        raise ContractError(f"task assigned to '{task.assignment}', not '{node.node_id}'")
    return task.cycles_required / node.cpu_rate


def comm_delay(size_bits: float, link: Link) -> float:
    """size_bits / bandwidth + propagation."""
    if size_bits <= 0:
        raise ContractError(f"message size must be positive, got {size_bits}")
    return size_bits / link.bandwidth + link.propagation


def total_delay(breakdown: DelayBreakdown) -> float:
    """cve + bve + kve."""
    return breakdown.total
