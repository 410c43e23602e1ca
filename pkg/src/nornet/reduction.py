"""Approximate elimination of intermediate nodes.

Removing an intermediate node rewires each predecessor to each successor
with the product of the two activation probabilities on the path, merges
parallel routes between the same pair with an OR-combination, and folds
the eliminated node's leak into every successor's leak. Applied to every
intermediate node this collapses a layered network onto diseases and
findings only. The transform ignores the correlations introduced when one
original edge fans out into several composed edges, which is exactly the
approximation the analysis module quantifies.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DomainError
from .model import Edge, Network, NodeKind


def compose_serial(p: float, q: float) -> float:
    """Activation probability of a two-edge path collapsed to one edge."""
    _check_prob("p", p)
    _check_prob("q", q)
    return p * q


def merge_parallel(composed: list[float]) -> float:
    """OR-combination of already-composed parallel path probabilities."""
    if not composed:
        raise DomainError("merge_parallel needs at least one path probability")
    acc = 1.0
    for value in composed:
        _check_prob("path probability", value)
        acc *= 1.0 - value
    return 1.0 - acc


def absorb_leak(rho_b: float, q: float, rho_c: float) -> float:
    """Fold an eliminated node's leak through its outgoing edge into the
    successor's leak: the upstream leak first attenuates by q, then
    OR-combines with the successor's own leak."""
    _check_prob("rho_b", rho_b)
    _check_prob("q", q)
    _check_prob("rho_c", rho_c)
    return 1.0 - (1.0 - rho_b * q) * (1.0 - rho_c)


def eliminate_ips(net: Network, b: str) -> Network:
    """Remove one intermediate node, rewiring predecessors to successors.

    For every predecessor P (edge eta p) and successor S (edge eta q) a
    composed edge P->S with eta p*q is added, OR-merged into any existing
    P->S edge. Each successor's leak absorbs the eliminated node's leak
    exactly once. Nodes with no predecessors or no successors are simply
    removed (leak absorption still applies to any successors).
    """
    node = net.node(b)
    if node.kind is not NodeKind.IPS:
        raise DomainError(f"{b!r} is a {node.kind.value} node, not an intermediate")
    preds = net.parents_of(b)
    succs = [(sid, net.edge(b, sid).eta) for sid in net.children_of(b)]

    new_nodes = []
    new_leaks = {}
    for sid, q in succs:
        new_leaks[sid] = absorb_leak(node.leak, q, net.node(sid).leak)
    for n in net.nodes:
        if n.id == b:
            continue
        if n.id in new_leaks:
            new_nodes.append(replace(n, leak=new_leaks[n.id]))
        else:
            new_nodes.append(n)

    etas: dict[tuple[str, str], float] = {}
    for edge in net.edges:
        if edge.src == b or edge.dst == b:
            continue
        etas[(edge.src, edge.dst)] = edge.eta
    for pid, p in preds:
        for sid, q in succs:
            composed = compose_serial(p, q)
            existing = etas.get((pid, sid))
            if existing is None:
                etas[(pid, sid)] = composed
            else:
                etas[(pid, sid)] = merge_parallel([existing, composed])
    new_edges = [Edge(src, dst, eta) for (src, dst), eta in sorted(etas.items())]
    return Network(net.name, new_nodes, new_edges)


@dataclass(frozen=True)
class PathProvenance:
    """Which original paths a reduced edge stands for.

    ``composed_etas[i]`` is the product of activation probabilities along
    ``source_paths[i]``. For an edge untouched by the reduction this is the
    single one-hop path with its original eta.
    """

    reduced_edge: tuple[str, str]
    source_paths: tuple[tuple[str, ...], ...]
    composed_etas: tuple[float, ...]


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of a full reduction: the collapsed network, per-edge
    provenance, activation-parameter counts for both networks, and the
    deterministic order in which intermediates were eliminated."""

    reduced: Network
    provenance: tuple[PathProvenance, ...]
    param_count_original: int
    param_count_reduced: int
    eliminated_ips_order: tuple[str, ...]


def _param_count(net: Network) -> int:
    return len(net.edges) + sum(1 for n in net.nodes if n.leak > 0.0)


def level_reduce(net: Network) -> ReductionReport:
    """Eliminate every intermediate node.

    Intermediates are processed in topological order with ascending-id tie
    break; the order is frozen because parallel-path merging is
    approximate, so different orders can give (slightly) different
    networks. The reduced network keeps the disease and finding nodes,
    priors, and phases of the input untouched; only finding leaks change,
    through leak absorption.
    """
    net.require_valid()
    ips_order = [
        nid for nid in net.topological_order()
        if net.node(nid).kind is NodeKind.IPS
    ]
    # per-edge origin bookkeeping in the fully original network
    paths: dict[tuple[str, str], list[tuple[tuple[str, ...], float]]] = {
        (e.src, e.dst): [((e.src, e.dst), e.eta)] for e in net.edges
    }
    current = net
    for b in ips_order:
        preds = [pid for pid, _ in current.parents_of(b)]
        succs = current.children_of(b)
        for pid in preds:
            for sid in succs:
                combined = [
                    (pp + sp[1:], pe * se)
                    for pp, pe in paths[(pid, b)]
                    for sp, se in paths[(b, sid)]
                ]
                paths.setdefault((pid, sid), []).extend(combined)
        for pid in preds:
            del paths[(pid, b)]
        for sid in succs:
            del paths[(b, sid)]
        current = eliminate_ips(current, b)
    provenance = []
    for edge in current.edges:
        entries = sorted(paths[(edge.src, edge.dst)])
        provenance.append(
            PathProvenance(
                (edge.src, edge.dst),
                tuple(p for p, _ in entries),
                tuple(eta for _, eta in entries),
            )
        )
    return ReductionReport(
        reduced=current,
        provenance=tuple(provenance),
        param_count_original=_param_count(net),
        param_count_reduced=_param_count(current),
        eliminated_ips_order=tuple(ips_order),
    )


def _check_prob(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} {value} outside [0, 1]")
