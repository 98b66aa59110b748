"""Virtual-time network simulation: topologies, delay model, event queue."""

from bcfl.core.types import DelayBreakdown
from bcfl.netsim.events import DelayEvent, EventQueue, ScheduledEvent, breakdown_from_events
from bcfl.netsim.model import (
    Link,
    NodeResource,
    SensingTask,
    Tier,
    comm_delay,
    exec_delay,
    total_delay,
)
from bcfl.netsim.network import NetworkState, OffloadNetwork, RoundDelayModel
from bcfl.netsim.topology import (
    ROOT,
    RoundMessages,
    Topology,
    TopologyKind,
    build_topology,
    client_node,
    round_messages,
)

__all__ = [
    "ROOT",
    "DelayBreakdown",
    "DelayEvent",
    "EventQueue",
    "Link",
    "NetworkState",
    "NodeResource",
    "OffloadNetwork",
    "RoundDelayModel",
    "RoundMessages",
    "ScheduledEvent",
    "SensingTask",
    "Tier",
    "Topology",
    "TopologyKind",
    "breakdown_from_events",
    "build_topology",
    "client_node",
    "comm_delay",
    "exec_delay",
    "round_messages",
    "total_delay",
]
