"""Capacity-annotated network graphs and per-edge traffic accounting.

Edge ids are ``"<from>-><to>"``; a topology may hold at most one edge per
ordered node pair. Capacities count units (bits or qubits) per protocol
round.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter


class TopologyError(ValueError):
    pass


class EdgeKind(enum.Enum):
    QUANTUM = "quantum"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class Node:
    id: str
    role: str = "internal"  # "sender:i", "target:i" or "internal"

    @property
    def index(self) -> int | None:
        if ":" in self.role:
            return int(self.role.split(":", 1)[1])
        return None


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    kind: EdgeKind
    capacity: int

    @property
    def id(self) -> str:
        return f"{self.src}->{self.dst}"


@dataclass(frozen=True)
class Topology:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    bottleneck: int  # index into edges

    def __post_init__(self):
        _check_topology(self.nodes, self.edges, self.bottleneck)

    @property
    def bottleneck_edge(self) -> Edge:
        return self.edges[self.bottleneck]

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(f"unknown edge {edge_id!r}")

    def topological_order(self) -> list[str]:
        ts = TopologicalSorter({n.id: set() for n in self.nodes})
        for e in self.edges:
            ts.add(e.dst, e.src)
        return list(ts.static_order())

    def to_dict(self) -> dict:
        return {
            "nodes": [{"id": n.id, "role": n.role} for n in self.nodes],
            "edges": [
                {"from": e.src, "to": e.dst, "kind": e.kind.value, "capacity": e.capacity}
                for e in self.edges
            ],
            "bottleneck": self.bottleneck,
        }


def _check_topology(nodes, edges, bottleneck):
    seen = {}
    for i, n in enumerate(nodes):
        if n.id in seen:
            raise TopologyError(f"nodes[{i}]: duplicate node id {n.id!r}")
        seen[n.id] = i
        if n.role != "internal":
            kind, _, idx = n.role.partition(":")
            if kind not in ("sender", "target") or not idx.isdigit() or int(idx) < 1:
                raise TopologyError(f"nodes[{i}]: bad role {n.role!r}")
    pairs = set()
    for i, e in enumerate(edges):
        for end in (e.src, e.dst):
            if end not in seen:
                raise TopologyError(f"edges[{i}]: unknown node {end!r}")
        if e.src == e.dst:
            raise TopologyError(f"edges[{i}]: self-loop on {e.src!r}")
        if e.capacity < 1:
            raise TopologyError(f"edges[{i}]: capacity must be >= 1, got {e.capacity}")
        if e.id in pairs:
            raise TopologyError(f"edges[{i}]: duplicate edge {e.id!r}")
        pairs.add(e.id)
    if not 0 <= bottleneck < len(edges):
        raise TopologyError(f"bottleneck: edge index {bottleneck} out of range")
    ts = TopologicalSorter({n.id: set() for n in nodes})
    for e in edges:
        ts.add(e.dst, e.src)
    try:
        ts.prepare()
    except CycleError as exc:
        cycle = exc.args[1]
        first = next(
            i for i, e in enumerate(edges) if e.src in cycle and e.dst in cycle
        )
        raise TopologyError(
            f"edges[{first}]: graph has a cycle through {' -> '.join(cycle)}"
        ) from None


def topology_from_dict(data: dict) -> Topology:
    """Parse the topology file schema, reporting the offending position."""
    if not isinstance(data, dict):
        raise TopologyError("top level must be an object")
    for key in ("nodes", "edges", "bottleneck"):
        if key not in data:
            raise TopologyError(f"missing key {key!r}")
    nodes = []
    for i, raw in enumerate(data["nodes"]):
        try:
            nodes.append(Node(str(raw["id"]), str(raw.get("role", "internal"))))
        except (KeyError, TypeError):
            raise TopologyError(f"nodes[{i}]: expected an object with 'id'") from None
    edges = []
    for i, raw in enumerate(data["edges"]):
        try:
            edges.append(
                Edge(str(raw["from"]), str(raw["to"]), EdgeKind(raw["kind"]), int(raw["capacity"]))
            )
        except (KeyError, TypeError, ValueError):
            raise TopologyError(
                f"edges[{i}]: expected 'from', 'to', 'kind' in {{quantum, classical}}, "
                "integer 'capacity'"
            ) from None
    bottleneck = data["bottleneck"]
    if not isinstance(bottleneck, int):
        raise TopologyError("bottleneck: expected an edge index")
    return Topology(tuple(nodes), tuple(edges), bottleneck)


def load_topology(path) -> Topology:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TopologyError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return topology_from_dict(data)


# Each classical side/sender edge carries one 2-bit correction word.
WORD_BITS = 2


def build_butterfly() -> Topology:
    nodes = tuple(
        Node(i, r)
        for i, r in [
            ("s1", "sender:1"),
            ("s2", "sender:2"),
            ("n1", "internal"),
            ("n2", "internal"),
            ("t1", "target:1"),
            ("t2", "target:2"),
        ]
    )
    c = EdgeKind.CLASSICAL
    edges = (
        Edge("s1", "n1", c, WORD_BITS),
        Edge("s2", "n1", c, WORD_BITS),
        Edge("n1", "n2", c, WORD_BITS),
        Edge("n2", "t1", c, WORD_BITS),
        Edge("n2", "t2", c, WORD_BITS),
        Edge("s1", "t2", c, WORD_BITS),
        Edge("s2", "t1", c, WORD_BITS),
    )
    return Topology(nodes, edges, bottleneck=2)


def check_demand(K: int, perm, passthrough: bool = False) -> tuple[int, ...]:
    """Validate a demand map; ``perm[t - 1]`` is the source wanted by target ``t``."""
    if K < 2:
        raise ValueError(f"K must be at least 2, got {K}")
    perm = tuple(int(p) for p in perm)
    if len(perm) != K or sorted(perm) != list(range(1, K + 1)):
        raise ValueError(f"perm {list(perm)} is not a permutation of 1..{K}")
    fixed = [t for t in range(1, K + 1) if perm[t - 1] == t]
    if passthrough:
        moved = [t for t in range(1, K + 1) if t not in fixed]
        if moved:
            raise ValueError(
                f"passthrough mode needs the identity placement; target {moved[0]} "
                "is not in front of its own sender"
            )
    elif fixed:
        raise ValueError(
            f"coded mode needs a derangement; target {fixed[0]} sits in front of its own sender"
        )
    return perm


def build_kpair(K: int, perm, passthrough: bool = False) -> Topology:
    """K-pair network with a classical bottleneck A->B.

    Coded mode: sender i -> A (one word), A -> B (2(K-1) bits), B -> every
    target, a side edge from sender t to the co-located target t, and one
    pre-shared quantum edge per resource carrying its far half from sender
    ``perm[t-1]`` to target ``t``. Passthrough mode replaces all of this
    with one quantum pass edge per sender/target pair (the bottleneck edge
    still exists but is never used).
    """
    perm = check_demand(K, perm, passthrough)
    nodes = [Node(f"s{i}", f"sender:{i}") for i in range(1, K + 1)]
    nodes += [Node("A"), Node("B")]
    nodes += [Node(f"t{i}", f"target:{i}") for i in range(1, K + 1)]
    c, q = EdgeKind.CLASSICAL, EdgeKind.QUANTUM
    edges = [Edge("A", "B", c, WORD_BITS * (K - 1))]
    if passthrough:
        edges += [Edge(f"s{i}", f"t{i}", q, 1) for i in range(1, K + 1)]
    else:
        edges += [Edge(f"s{i}", "A", c, WORD_BITS) for i in range(1, K + 1)]
        edges += [Edge("B", f"t{t}", c, WORD_BITS * (K - 1)) for t in range(1, K + 1)]
        edges += [Edge(f"s{t}", f"t{t}", c, WORD_BITS) for t in range(1, K + 1)]
        edges += [Edge(f"s{perm[t - 1]}", f"t{t}", q, 1) for t in range(1, K + 1)]
    return Topology(tuple(nodes), tuple(edges), bottleneck=0)


@dataclass(frozen=True)
class TrafficRecord:
    edge: str
    payload: str  # "bit" or "qubit"
    units: int
    description: str
    phase: str = "round"  # "setup" for pre-shared resource distribution


@dataclass
class TrafficLog:
    records: list[TrafficRecord] = field(default_factory=list)

    def send(self, edge: str, payload: str, units: int, description: str, phase: str = "round"):
        self.records.append(TrafficRecord(edge, payload, int(units), description, phase))

    def to_list(self) -> list[dict]:
        return [
            {
                "edge": r.edge,
                "payload": r.payload,
                "units": r.units,
                "description": r.description,
                "phase": r.phase,
            }
            for r in self.records
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_list(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Violation:
    edge: str
    used: int
    capacity: int


def validate_traffic(log: TrafficLog, topo: Topology) -> list[Violation]:
    used = defaultdict(int)
    for r in log.records:
        try:
            e = topo.edge(r.edge)
        except KeyError:
            raise KeyError(f"traffic logged on unknown edge {r.edge!r}") from None
        if (e.kind is EdgeKind.QUANTUM) != (r.payload == "qubit"):
            raise ValueError(f"{r.payload} payload on {e.kind.value} edge {r.edge!r}")
        used[r.edge] += r.units
    return [
        Violation(e.id, used[e.id], e.capacity)
        for e in topo.edges
        if used[e.id] > e.capacity
    ]


def bottleneck_usage(log: TrafficLog, topo: Topology) -> int:
    bid = topo.bottleneck_edge.id
    return sum(r.units for r in log.records if r.edge == bid and r.payload == "bit")
