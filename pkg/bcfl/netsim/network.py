"""Round delay accounting over the three-tier network.

Every hop that delivers k messages of s bits over a link costs
``comm_delay(k * s, link)``: messages converging on one receiver are
serialized on its ingress. Per-client events carry weight 1/n and per-layer
relay events 1/|layer|, so each tier of the breakdown is a mean path cost.
"""

from dataclasses import dataclass

import numpy as np

from bcfl.config import DelayCalibration, LinkConfig
from bcfl.core.rng import Stream, substream
from bcfl.netsim.events import DelayEvent
from bcfl.netsim.model import Link, NodeResource, SensingTask, Tier, comm_delay, exec_delay
from bcfl.netsim.topology import ROOT, Topology, TopologyKind, client_node


def to_link(link: LinkConfig) -> Link:
    return Link(link.bandwidth, link.propagation)


def edge_fog(client_id: int, clients_per_fog: int) -> str:
    """Offload fog node serving a client."""
    return f"edge-fog-{client_id // clients_per_fog}"


@dataclass(frozen=True)
class NetworkState:
    """Per-round background load and sensing tasks.

    Attributes:
        fog_utilization: Edge fog id -> background utilization in [0, max)
        cloud_utilization: Background utilization of the cloud
        task_factors: Per-client task size factor
    """

    fog_utilization: dict[str, float]
    cloud_utilization: float
    task_factors: tuple[float, ...]


class OffloadNetwork:
    """Client, edge-fog and cloud compute nodes for sensing-task offloading."""

    def __init__(self, calibration: DelayCalibration, n_clients: int, seed: int):
        self.calibration = calibration
        self.n_clients = n_clients
        self.seed = seed
        self.access = to_link(calibration.links.access)
        self.backhaul = to_link(calibration.links.backhaul)
        n_fogs = -(-n_clients // calibration.clients_per_fog)
        self.fog_ids = tuple(f"edge-fog-{j}" for j in range(n_fogs))

    def draw_state(self, round_index: int, rng: np.random.Generator | None = None) -> NetworkState:
        """Background utilization u ~ U(0, max_utilization) per fog and for the
        cloud, and task factors ~ U(1 - spread, 1 + spread) per client."""
        cal = self.calibration
        rng = rng or substream(self.seed, Stream.NETWORK, round_index)
        fog_util = {fog: float(rng.uniform(0.0, cal.max_utilization)) for fog in self.fog_ids}
        cloud_util = float(rng.uniform(0.0, cal.max_utilization))
        spread = cal.task_size_spread
        factors = tuple(
            float(f) for f in rng.uniform(1.0 - spread, 1.0 + spread, size=self.n_clients)
        )
        return NetworkState(fog_util, cloud_util, factors)

    def task_for(self, client_id: int, state: NetworkState) -> SensingTask:
        factor = state.task_factors[client_id]
        return SensingTask(
            origin_client=client_id,
            size_bits=self.calibration.task_size_bits * factor,
            cycles_required=self.calibration.task_cycles * factor,
        )

    def node_for(self, tier: Tier, client_id: int, state: NetworkState) -> NodeResource:
        """Compute node of ``tier`` reachable by the client, loaded per ``state``."""
        cal = self.calibration
        match tier:
            case Tier.CLIENT:
                return NodeResource(client_node(client_id), Tier.CLIENT, cal.cpu_client)
            case Tier.FOG:
                fog = edge_fog(client_id, cal.clients_per_fog)
                rate = cal.cpu_fog * (1.0 - state.fog_utilization[fog])
                return NodeResource(fog, Tier.FOG, rate, {client_node(client_id): self.access})
            case Tier.CLOUD:
                rate = cal.cpu_cloud * (1.0 - state.cloud_utilization)
                fog = edge_fog(client_id, cal.clients_per_fog)
                return NodeResource(ROOT, Tier.CLOUD, rate, {fog: self.backhaul})

    def task_delay(self, task: SensingTask, tier: Tier, state: NetworkState) -> float:
        """Execution plus transmission delay of a task processed at ``tier``."""
        node = self.node_for(tier, task.origin_client, state)
        seconds = exec_delay(task.assign(node.node_id), node)
        if tier is not Tier.CLIENT:
            seconds += comm_delay(task.size_bits, self.access)
        if tier is Tier.CLOUD:
            seconds += comm_delay(task.size_bits, self.backhaul)
        return seconds


class RoundDelayModel:
    """Delay events of the federated phases of a round over a topology."""

    def __init__(
        self,
        calibration: DelayCalibration,
        topology: Topology,
        update_bits: float,
        upload_bits: float | None = None,
        star_link: str = "access",
    ):
        self.calibration = calibration
        self.topology = topology
        self.update_bits = update_bits
        self.upload_bits = upload_bits if upload_bits is not None else update_bits
        links = calibration.links
        self.links = {
            name: to_link(getattr(links, name))
            for name in ("access", "fog", "backhaul", "wan", "peer")
        }
        self.star_link = self.links[star_link]
        self.n = topology.n_clients

    def _hop_link(self, sender: str, receiver: str) -> Link:
        """Link class of an upload hop from ``sender`` to ``receiver``."""
        if self.topology.kind is TopologyKind.STAR:
            return self.star_link
        if sender.startswith("client-"):
            return self.links["access"]
        return self.links["backhaul"] if receiver == ROOT else self.links["fog"]

    def _aggregate_seconds(self, updates: int, cpu_rate: float) -> float:
        return self.calibration.aggregate_cycles_per_update * updates / cpu_rate

    def training_seconds(self, samples: int, epochs: int) -> float:
        cal = self.calibration
        return samples * epochs * cal.train_cycles_per_sample_epoch / cal.cpu_client

    def upload_seconds(self, client_id: int) -> float:
        """Client's upload hop, serialized with its siblings or gossip targets."""
        topo = self.topology
        if topo.kind is TopologyKind.P2P:
            return comm_delay(topo.fanout * self.upload_bits, self.links["peer"])
        node = client_node(client_id)
        parent = topo.parent_of(node)
        assert parent is not None
        k = len(topo.children[parent])
        return comm_delay(k * self.upload_bits, self._hop_link(node, parent))

    def relay_events(self, round_index: int) -> list[DelayEvent]:
        """Aggregation and forwarding at every non-root hierarchy layer."""
        topo = self.topology
        events = []
        for layer in topo.levels[:-1]:
            for fog in layer:
                parent = topo.parent_of(fog)
                assert parent is not None
                seconds = self._aggregate_seconds(len(topo.children[fog]), self.calibration.cpu_fog)
                seconds += comm_delay(
                    len(topo.children[parent]) * self.update_bits, self._hop_link(fog, parent)
                )
                events.append(
                    DelayEvent(round_index, "relay", Tier.FOG, fog, seconds, 1.0 / len(layer))
                )
        return events

    def download_seconds(self, client_id: int) -> float:
        """Global model delivery from the root down the client's path."""
        topo = self.topology
        node = client_node(client_id)
        path = [node, *topo.path_to_root(node)]
        seconds = 0.0
        # hop from path[i + 1] down to path[i]
        for child, sender in zip(path[:-1], path[1:], strict=True):
            k = len(topo.children[sender])
            seconds += comm_delay(k * self.update_bits, self._hop_link(child, sender))
        return seconds

    def cloud_events(self, round_index: int) -> list[DelayEvent]:
        """Root aggregation and model download (or local gossip aggregation)."""
        topo = self.topology
        if topo.kind is TopologyKind.P2P:
            inbound = topo.inbound_counts()
            return [
                DelayEvent(
                    round_index,
                    "local_aggregation",
                    Tier.CLOUD,
                    node,
                    self._aggregate_seconds(count, self.calibration.cpu_client),
                    1.0 / self.n,
                )
                for node, count in inbound.items()
            ]
        root = topo.root
        assert root is not None
        events = [
            DelayEvent(
                round_index,
                "aggregation",
                Tier.CLOUD,
                root,
                self._aggregate_seconds(len(topo.children[root]), self.calibration.cpu_cloud),
            )
        ]
        for client in range(self.n):
            events.append(
                DelayEvent(
                    round_index,
                    "download",
                    Tier.CLOUD,
                    client_node(client),
                    self.download_seconds(client),
                    1.0 / self.n,
                )
            )
        return events

    def raw_upload_seconds(self, samples_per_client: int) -> float:
        """Centralized mode: every client ships its raw dataset to the root."""
        bits = samples_per_client * self.calibration.raw_sample_bits
        return comm_delay(self.n * bits, self.star_link)

    def central_training_seconds(self, total_samples: int, epochs: int) -> float:
        cal = self.calibration
        return total_samples * epochs * cal.train_cycles_per_sample_epoch / cal.cpu_cloud
