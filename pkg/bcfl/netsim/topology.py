"""Coordination topologies: star, balanced b-ary hierarchy, gossip p2p."""

from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property

import numpy as np

from bcfl.errors import ConfigurationError

ROOT = "cloud"


class TopologyKind(StrEnum):
    STAR = "star"
    HIERARCHY = "hierarchy"
    P2P = "p2p"


def client_node(client_id: int) -> str:
    return f"client-{client_id}"


@dataclass(frozen=True)
class Topology:
    """Who sends updates to whom in one round.

    Attributes:
        kind: Coordination structure
        n_clients: Number of real clients
        children: Aggregator id -> ids of the nodes uploading to it
        levels: Aggregator ids per layer, bottom (fed by clients) to top (root)
        peers: p2p only, peers[i] = sorted gossip targets of client i
        branching: Hierarchy branching factor b
        fanout: p2p fanout
    """

    kind: TopologyKind
    n_clients: int
    children: dict[str, tuple[str, ...]] = field(default_factory=dict)
    levels: tuple[tuple[str, ...], ...] = ()
    peers: tuple[tuple[int, ...], ...] = ()
    branching: int = 0
    fanout: int = 0

    @property
    def root(self) -> str | None:
        return self.levels[-1][0] if self.levels else None

    @property
    def depth(self) -> int:
        """Number of aggregator layers."""
        return len(self.levels)

    @cached_property
    def parents(self) -> dict[str, str]:
        """Node id -> aggregator it uploads to."""
        return {kid: agg for agg, kids in self.children.items() for kid in kids}

    def parent_of(self, node: str) -> str | None:
        return self.parents.get(node)

    def path_to_root(self, node: str) -> list[str]:
        """Aggregators from ``node``'s parent up to the root."""
        path = []
        current = self.parent_of(node)
        while current is not None:
            path.append(current)
            current = self.parent_of(current)
        return path

    def inbound_counts(self) -> dict[str, int]:
        """Upload messages received per node in one round."""
        if self.kind is TopologyKind.P2P:
            counts = {client_node(i): 0 for i in range(self.n_clients)}
            for targets in self.peers:
                for peer in targets:
                    counts[client_node(peer)] += 1
            return counts
        return {node: len(kids) for node, kids in self.children.items()}

    @property
    def edge_count(self) -> int:
        """Upload edges, i.e. messages of one round."""
        if self.kind is TopologyKind.P2P:
            return sum(len(t) for t in self.peers)
        return sum(len(kids) for kids in self.children.values())


def build_topology(
    kind: TopologyKind | str,
    n_clients: int,
    branching: int = 2,
    fanout: int = 1,
    rng: np.random.Generator | None = None,
) -> Topology:
    """Build the round communication structure.

    A hierarchy groups consecutive nodes into chunks of ``branching`` per
    layer until one node remains, which is the cloud root; its depth is
    ceil(log_b n) for n >= 2 and 1 for a single client.

    Raises:
        ConfigurationError: If n_clients < 1, branching < 2, fanout outside
            [1, n_clients) or an unknown kind is given
    """
    if n_clients < 1:
        raise ConfigurationError(f"n_clients must be >= 1, got {n_clients}")
    kind = TopologyKind(kind)
    clients = tuple(client_node(i) for i in range(n_clients))

    if kind is TopologyKind.STAR:
        return Topology(kind, n_clients, children={ROOT: clients}, levels=((ROOT,),))

    if kind is TopologyKind.HIERARCHY:
        if branching < 2:
            raise ConfigurationError(f"branching must be >= 2, got {branching}")
        children: dict[str, tuple[str, ...]] = {}
        levels: list[tuple[str, ...]] = []
        layer = clients
        level = 1
        while True:
            chunks = [layer[i : i + branching] for i in range(0, len(layer), branching)]
            if len(chunks) == 1:
                children[ROOT] = chunks[0]
                levels.append((ROOT,))
                break
            names = tuple(f"fog-{level}-{j}" for j in range(len(chunks)))
            children.update(zip(names, chunks, strict=True))
            levels.append(names)
            layer = names
            level += 1
        return Topology(
            kind, n_clients, children=children, levels=tuple(levels), branching=branching
        )

    if fanout < 1 or fanout >= n_clients:
        raise ConfigurationError(f"fanout must lie in [1, {n_clients}), got {fanout}")
    if rng is None:
        raise ConfigurationError("p2p topology needs a seeded generator")
    peers = []
    for i in range(n_clients):
        others = np.array([j for j in range(n_clients) if j != i])
        chosen = rng.choice(others, size=fanout, replace=False)
        peers.append(tuple(sorted(int(p) for p in chosen)))
    return Topology(kind, n_clients, peers=tuple(peers), fanout=fanout)


@dataclass(frozen=True)
class RoundMessages:
    messages_root: int
    messages_total: int
    max_inbound_any_node: int


def round_messages(topology: Topology) -> RoundMessages:
    """Upload message counts of one round."""
    inbound = topology.inbound_counts()
    root = topology.root
    return RoundMessages(
        messages_root=inbound.get(root, 0) if root is not None else 0,
        messages_total=topology.edge_count,
        max_inbound_any_node=max(inbound.values(), default=0),
    )
