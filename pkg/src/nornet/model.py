"""Network data model and leaky noisy-OR local semantics.

A :class:`Network` is a leveled DAG of binary nodes: disease roots with
priors, hidden intermediate (IPS) nodes, and observable finding leaves.
Every non-root node combines its parents through a leaky noisy-OR: each
incoming edge carries an activation probability, and the node's leak is
the probability it turns on with every modeled parent absent.

Networks and assignments are immutable after construction, so they can be
shared freely across threads and worker processes.
"""

from __future__ import annotations

import enum
import heapq
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .errors import DomainError, IncompleteAssignmentError, ValidationError


class NodeKind(enum.Enum):
    DISEASE = "disease"
    IPS = "ips"
    FINDING = "finding"


# Legal edge directions: diseases feed intermediates and findings,
# intermediates feed intermediates and findings, findings feed nothing.
_LEGAL_ARCS = {
    (NodeKind.DISEASE, NodeKind.IPS),
    (NodeKind.DISEASE, NodeKind.FINDING),
    (NodeKind.IPS, NodeKind.IPS),
    (NodeKind.IPS, NodeKind.FINDING),
}

PHASES = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class Node:
    """One binary variable.

    ``prior`` is set exactly for diseases, ``phase`` exactly for findings.
    Diseases are roots: their leak is fixed at 0 and their prior is the
    marginal probability of being present.
    """

    id: str
    kind: NodeKind
    leak: float = 0.0
    prior: float | None = None
    phase: int | None = None


def disease(node_id: str, prior: float) -> Node:
    return Node(node_id, NodeKind.DISEASE, leak=0.0, prior=prior)


def ips(node_id: str, leak: float = 0.0) -> Node:
    return Node(node_id, NodeKind.IPS, leak=leak)


def finding(node_id: str, leak: float = 0.0, phase: int = 1) -> Node:
    return Node(node_id, NodeKind.FINDING, leak=leak, phase=phase)


@dataclass(frozen=True)
class Edge:
    """Directed causal arc with activation probability ``eta``."""

    src: str
    dst: str
    eta: float


class Assignment(Mapping):
    """Immutable partial map of node ids to present (True) / absent (False).

    Iteration is in ascending id order so that any derived output is
    deterministic.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[str, bool] | Iterable[tuple[str, bool]] = ()):
        items = values.items() if isinstance(values, Mapping) else values
        self._values = {k: bool(v) for k, v in items}

    def __getitem__(self, key: str) -> bool:
        return self._values[key]

    def __iter__(self):
        return iter(sorted(self._values))

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other) -> bool:
        if isinstance(other, Assignment):
            return self._values == other._values
        if isinstance(other, Mapping):
            return self._values == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={'1' if self._values[k] else '0'}" for k in self)
        return f"Assignment({inner})"

    def present_ids(self) -> tuple[str, ...]:
        return tuple(k for k in self if self._values[k])

    def union(self, *others: "Assignment") -> "Assignment":
        """Merge disjoint assignments; conflicting duplicate keys are an error."""
        merged = dict(self._values)
        for other in others:
            for k, v in other._values.items():
                if k in merged and merged[k] != v:
                    raise DomainError(f"conflicting value for {k!r} in assignment union")
                merged[k] = v
        return Assignment(merged)

    # Plain-dict state keeps instances picklable despite __slots__.
    def __getstate__(self):
        return self._values

    def __setstate__(self, state):
        self._values = state


@dataclass(frozen=True)
class Violation:
    """One violated invariant, tied to the node or edge that breaks it."""

    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} [{self.subject}]: {self.message}"


class Network:
    """Immutable leveled DAG with leaky noisy-OR semantics.

    The constructor rejects structures it cannot even index (duplicate
    ids, duplicate edges, edges naming unknown nodes). Everything else —
    ranges, level ordering, acyclicity — is reported by :func:`validate`
    rather than raised, so invalid networks can be inspected.
    """

    def __init__(self, name: str, nodes: Iterable[Node], edges: Iterable[Edge]):
        self.name = name
        node_map: dict[str, Node] = {}
        for node in nodes:
            if node.id in node_map:
                raise DomainError(f"duplicate node id {node.id!r}")
            node_map[node.id] = node
        edge_map: dict[tuple[str, str], Edge] = {}
        for edge in edges:
            key = (edge.src, edge.dst)
            if key in edge_map:
                raise DomainError(f"duplicate edge {edge.src}->{edge.dst}")
            if edge.src not in node_map:
                raise DomainError(f"edge source {edge.src!r} is not a node")
            if edge.dst not in node_map:
                raise DomainError(f"edge target {edge.dst!r} is not a node")
            edge_map[key] = edge
        self._nodes = node_map
        self._edges = edge_map
        parents: dict[str, list[tuple[str, float]]] = {nid: [] for nid in node_map}
        children: dict[str, list[str]] = {nid: [] for nid in node_map}
        for (src, dst), edge in edge_map.items():
            parents[dst].append((src, edge.eta))
            children[src].append(dst)
        for nid in node_map:
            parents[nid].sort()
            children[nid].sort()
        self._parents = parents
        self._children = children
        self._topo: tuple[str, ...] | None = None
        self._violations: tuple[Violation, ...] | None = None
        # memo for derived read-only structure (sampling plans etc.);
        # safe because the network never mutates
        self._derived: dict = {}

    # -- structure accessors -------------------------------------------------

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._nodes))

    @property
    def nodes(self) -> tuple[Node, ...]:
        return tuple(self._nodes[nid] for nid in sorted(self._nodes))

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges[key] for key in sorted(self._edges))

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise DomainError(f"unknown node {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def edge(self, src: str, dst: str) -> Edge | None:
        return self._edges.get((src, dst))

    def parents_of(self, node_id: str) -> tuple[tuple[str, float], ...]:
        """(parent id, eta) pairs in ascending parent-id order."""
        return tuple(self._parents[node_id])

    def children_of(self, node_id: str) -> tuple[str, ...]:
        return tuple(self._children[node_id])

    def nodes_of_kind(self, kind: NodeKind) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind is kind)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.name == other.name
            and self._nodes == other._nodes
            and self._edges == other._edges
        )

    def __repr__(self) -> str:
        return (
            f"Network({self.name!r}, {len(self._nodes)} nodes, "
            f"{len(self._edges)} edges)"
        )

    # -- derived structure ----------------------------------------------------

    def topological_order(self) -> tuple[str, ...]:
        """Node ids sorted topologically, ties broken by ascending id.

        Raises ValidationError if the edge relation has a cycle.
        """
        if self._topo is None:
            order = self._try_topological_order()
            if order is None:
                raise ValidationError(
                    "network contains a cycle", validate(self)
                )
            self._topo = order
        return self._topo

    def _try_topological_order(self) -> tuple[str, ...] | None:
        indegree = {nid: len(self._parents[nid]) for nid in self._nodes}
        ready = [nid for nid, deg in indegree.items() if deg == 0]
        heapq.heapify(ready)
        order: list[str] = []
        while ready:
            nid = heapq.heappop(ready)
            order.append(nid)
            for child in self._children[nid]:
                indegree[child] -= 1
                if indegree[child] == 0:
                    heapq.heappush(ready, child)
        if len(order) != len(self._nodes):
            return None
        return tuple(order)

    def require_valid(self) -> "Network":
        """Raise ValidationError unless the network is structurally valid."""
        violations = self.violations()
        if violations:
            raise ValidationError(
                f"network {self.name!r} has {len(violations)} violation(s): "
                + "; ".join(str(v) for v in violations[:3]),
                violations,
            )
        return self

    def violations(self) -> tuple[Violation, ...]:
        if self._violations is None:
            self._violations = tuple(validate(self))
        return self._violations


def validate(net: Network) -> list[Violation]:
    """Check every structural invariant; an empty list means valid.

    Violations are data, not exceptions: each names the offending node or
    edge and the rule it breaks.
    """
    out: list[Violation] = []
    for node in net.nodes:
        nid = node.id
        if not nid or any(c.isspace() for c in nid):
            out.append(Violation("node-id", repr(nid), "id must be nonempty without whitespace"))
        if not 0.0 <= node.leak <= 1.0:
            out.append(Violation("leak-range", nid, f"leak {node.leak} outside [0, 1]"))
        if node.kind is NodeKind.DISEASE:
            if node.leak != 0.0:
                out.append(Violation("disease-leak", nid, "disease nodes must have leak 0"))
            if node.prior is None:
                out.append(Violation("prior-missing", nid, "disease nodes require a prior"))
            elif not 0.0 <= node.prior <= 1.0:
                out.append(Violation("prior-range", nid, f"prior {node.prior} outside [0, 1]"))
        elif node.prior is not None:
            out.append(Violation("prior-unexpected", nid, f"{node.kind.value} nodes take no prior"))
        if node.kind is NodeKind.FINDING:
            if node.phase is None:
                out.append(Violation("phase-missing", nid, "finding nodes require a phase"))
            elif node.phase not in PHASES:
                out.append(Violation("phase-range", nid, f"phase {node.phase} outside 1..5"))
        elif node.phase is not None:
            out.append(Violation("phase-unexpected", nid, f"{node.kind.value} nodes take no phase"))
    for edge in net.edges:
        subject = f"{edge.src}->{edge.dst}"
        if not 0.0 < edge.eta <= 1.0:
            out.append(Violation("eta-range", subject, f"eta {edge.eta} outside (0, 1]"))
        src_kind = net.node(edge.src).kind
        dst_kind = net.node(edge.dst).kind
        if (src_kind, dst_kind) not in _LEGAL_ARCS:
            out.append(
                Violation(
                    "level-ordering",
                    subject,
                    f"{src_kind.value} may not feed {dst_kind.value}",
                )
            )
    if net._try_topological_order() is None:
        out.append(Violation("dag", net.name, "edge relation contains a cycle"))
    return out


def noisy_or_prob(leak: float, present_etas: Iterable[float]) -> float:
    """Probability the effect is present given leak and the etas of its
    present causes: 1 - (1 - leak) * prod(1 - eta).

    With no present causes this is just the leak.
    """
    if not 0.0 <= leak <= 1.0:
        raise DomainError(f"leak {leak} outside [0, 1]")
    all_fail = 1.0
    for eta in present_etas:
        if not 0.0 <= eta <= 1.0:
            raise DomainError(f"eta {eta} outside [0, 1]")
        all_fail *= 1.0 - eta
    if all_fail == 1.0:
        return leak
    return 1.0 - (1.0 - leak) * all_fail


def local_cpd(net: Network, node_id: str, parent_assignment: Mapping) -> float:
    """P(node present | parent values).

    Diseases are roots, so they simply return their prior; other nodes
    apply the leaky noisy-OR over the parents marked present. Every
    parent must be assigned; absent parents contribute nothing.
    """
    node = net.node(node_id)
    if node.kind is NodeKind.DISEASE:
        return float(node.prior)
    present = []
    for pid, eta in net.parents_of(node_id):
        if pid not in parent_assignment:
            raise IncompleteAssignmentError(
                f"parent {pid!r} of {node_id!r} has no assigned value"
            )
        if parent_assignment[pid]:
            present.append(eta)
    return noisy_or_prob(node.leak, present)
