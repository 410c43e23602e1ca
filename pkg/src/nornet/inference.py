"""Exact posterior computation.

Two independent engines answer every query:

* ``enumeration`` — depth-first summation over all unobserved-node states,
  sharing prefix products along the topological order. This is the
  reference implementation everything else is checked against.
* ``elimination`` — variable elimination over dense binary factors with a
  min-degree ordering, for networks whose unobserved core is too large to
  enumerate.

Both engines first drop barren leaves (nodes with no observed or queried
descendants); marginalizing such a node multiplies the joint by exactly 1,
so the answers are unchanged while partial-evidence queries stay feasible.
The ``auto`` method enumerates whenever the pruned unobserved count is at
most ``enumeration_threshold`` and eliminates otherwise.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .errors import DomainError, EvidenceError, IncompleteAssignmentError
from .factors import Factor, min_degree_order, multiply, sum_out
from .model import Network, NodeKind

DEFAULT_ENUMERATION_THRESHOLD = 20
DEFAULT_MAX_FACTOR_PARENTS = 12


@dataclass(frozen=True)
class PosteriorResult:
    """Per-disease posteriors plus the evidence probability they were
    normalized by. ``conjunction`` is filled only when a joint all-present
    query was requested."""

    posteriors: dict[str, float]
    evidence_likelihood: float
    conjunction: float | None = None


def joint_prob(net: Network, full_assignment: Mapping) -> float:
    """Probability of one complete world (every node assigned)."""
    net.require_valid()
    state = dict(full_assignment)
    missing = [nid for nid in net.node_ids if nid not in state]
    if missing:
        raise IncompleteAssignmentError(
            f"assignment misses {len(missing)} node(s), e.g. {missing[0]!r}"
        )
    for nid in state:
        net.node(nid)
    prob = 1.0
    for nid in net.topological_order():
        p = _prob_present(net, nid, state)
        prob *= p if state[nid] else 1.0 - p
    return prob


def _prob_present(net: Network, nid: str, state: Mapping) -> float:
    node = net.node(nid)
    if node.kind is NodeKind.DISEASE:
        return float(node.prior)
    acc = 1.0 - node.leak
    for pid, eta in net.parents_of(nid):
        if state[pid]:
            acc *= 1.0 - eta
    return 1.0 - acc


def _normalize_assignment(net: Network, assignment: Mapping) -> dict[str, bool]:
    fixed = {}
    for nid, value in dict(assignment).items():
        net.node(nid)
        fixed[nid] = bool(value)
    return fixed


def _prune_barren(net: Network, needed: set[str]) -> list[str]:
    """Kept node ids in topological order: a node survives iff it is needed
    or some child of it survives."""
    order = net.topological_order()
    kept: set[str] = set()
    for nid in reversed(order):
        if nid in needed or any(c in kept for c in net.children_of(nid)):
            kept.add(nid)
    return [nid for nid in order if nid in kept]


# -- enumeration engine -------------------------------------------------------


def _enum_query(net, kept_order, fixed, track):
    index = {nid: i for i, nid in enumerate(kept_order)}
    plan = []
    for nid in kept_order:
        node = net.node(nid)
        fval = fixed.get(nid)
        if node.kind is NodeKind.DISEASE:
            plan.append((fval, True, float(node.prior), ()))
        else:
            parents = tuple((index[pid], 1.0 - eta) for pid, eta in net.parents_of(nid))
            plan.append((fval, False, 1.0 - node.leak, parents))
    n = len(plan)
    track_pos = [index[t] for t in track]
    state = [False] * n
    total = 0.0
    masses = [0.0] * len(track_pos)

    def rec(i: int, w: float):
        nonlocal total
        if i == n:
            total += w
            for k, pos in enumerate(track_pos):
                if state[pos]:
                    masses[k] += w
            return
        fval, is_disease, base, parents = plan[i]
        if is_disease:
            p = base
        else:
            acc = base
            for j, one_minus_eta in parents:
                if state[j]:
                    acc *= one_minus_eta
            p = 1.0 - acc
        if fval is None:
            if p > 0.0:
                state[i] = True
                rec(i + 1, w * p)
            if p < 1.0:
                state[i] = False
                rec(i + 1, w * (1.0 - p))
        else:
            state[i] = fval
            nw = w * (p if fval else 1.0 - p)
            if nw != 0.0:
                rec(i + 1, nw)

    rec(0, 1.0)
    return total, dict(zip(track, masses))


# -- variable elimination engine ----------------------------------------------


def _node_factor(net, nid, fixed, max_factor_parents):
    node = net.node(nid)
    parents = net.parents_of(nid)
    if len(parents) > max_factor_parents:
        raise DomainError(
            f"node {nid!r} has {len(parents)} parents; elimination materializes "
            f"full tables only up to {max_factor_parents} (see max_factor_parents)"
        )
    family = [nid] + [pid for pid, _ in parents]
    scope = tuple(sorted(v for v in family if v not in fixed))
    etas = dict(parents)
    values = [0.0] * (1 << len(scope))
    for idx in range(len(values)):
        state = dict(fixed)
        for bit, var in enumerate(scope):
            state[var] = bool((idx >> bit) & 1)
        if node.kind is NodeKind.DISEASE:
            p = float(node.prior)
        else:
            acc = 1.0 - node.leak
            for pid in etas:
                if state[pid]:
                    acc *= 1.0 - etas[pid]
            p = 1.0 - acc
        values[idx] = p if state[nid] else 1.0 - p
    return Factor(scope, values)


def _ve_likelihood(net, kept_order, fixed, max_factor_parents):
    factors = [_node_factor(net, nid, fixed, max_factor_parents) for nid in kept_order]
    hidden = sorted(nid for nid in kept_order if nid not in fixed)
    for var in min_degree_order(hidden, [f.scope for f in factors]):
        related = [f for f in factors if var in f.scope]
        factors = [f for f in factors if var not in f.scope]
        prod = related[0]
        for f in related[1:]:
            prod = multiply(prod, f)
        factors.append(sum_out(prod, var))
    result = 1.0
    for f in factors:
        result *= f.values[0]
    return result


# -- shared dispatch ------------------------------------------------------------


def _query(net, fixed, track, method, enumeration_threshold, max_factor_parents):
    """P(fixed assignment) and, per tracked node, P(node present AND fixed)."""
    net.require_valid()
    kept = _prune_barren(net, set(fixed) | set(track))
    unobserved = len(kept) - len(fixed)
    if method == "auto":
        method = "enumeration" if unobserved <= enumeration_threshold else "elimination"
    if method == "enumeration":
        return _enum_query(net, kept, fixed, track)
    if method == "elimination":
        total = _ve_likelihood(net, kept, fixed, max_factor_parents)
        masses = {}
        for t in track:
            if t in fixed:
                masses[t] = total if fixed[t] else 0.0
            else:
                masses[t] = _ve_likelihood(net, kept, {**fixed, t: True}, max_factor_parents)
        return total, masses
    raise DomainError(f"unknown inference method {method!r}")


def event_prob(
    net: Network,
    assignment: Mapping,
    *,
    method: str = "auto",
    enumeration_threshold: int = DEFAULT_ENUMERATION_THRESHOLD,
    max_factor_parents: int = DEFAULT_MAX_FACTOR_PARENTS,
) -> float:
    """Probability of a partial assignment over any subset of nodes."""
    fixed = _normalize_assignment(net, assignment)
    total, _ = _query(net, fixed, (), method, enumeration_threshold, max_factor_parents)
    return total


def marginal(
    net: Network,
    node_id: str,
    *,
    method: str = "auto",
    enumeration_threshold: int = DEFAULT_ENUMERATION_THRESHOLD,
    max_factor_parents: int = DEFAULT_MAX_FACTOR_PARENTS,
) -> float:
    """Exact P(node present) with no evidence."""
    net.node(node_id)
    total, masses = _query(
        net, {}, (node_id,), method, enumeration_threshold, max_factor_parents
    )
    return _clamp01(masses[node_id] / total)


def posterior(
    net: Network,
    evidence: Mapping,
    *,
    conjunction: Iterable[str] | None = None,
    method: str = "auto",
    enumeration_threshold: int = DEFAULT_ENUMERATION_THRESHOLD,
    max_factor_parents: int = DEFAULT_MAX_FACTOR_PARENTS,
) -> PosteriorResult:
    """Exact P(disease present | evidence) for every disease.

    Evidence may assign finding nodes only. With ``conjunction`` set, the
    result also carries P(all listed nodes present | evidence).
    """
    fixed = _normalize_assignment(net, evidence)
    for nid in fixed:
        if net.node(nid).kind is not NodeKind.FINDING:
            raise DomainError(f"evidence node {nid!r} is not a finding")
    diseases = tuple(n.id for n in net.nodes_of_kind(NodeKind.DISEASE))
    total, masses = _query(
        net, fixed, diseases, method, enumeration_threshold, max_factor_parents
    )
    if total <= 0.0:
        raise EvidenceError("evidence has zero probability under this network")
    posteriors = {d: _clamp01(masses[d] / total) for d in diseases}
    conj_value = None
    if conjunction is not None:
        conj = sorted(set(conjunction))
        for nid in conj:
            net.node(nid)
            if nid in fixed and not fixed[nid]:
                raise DomainError(f"conjunction node {nid!r} is observed absent")
        conj_fixed = dict(fixed)
        conj_fixed.update({nid: True for nid in conj})
        conj_total, _ = _query(
            net, conj_fixed, (), method, enumeration_threshold, max_factor_parents
        )
        conj_value = _clamp01(conj_total / total)
    return PosteriorResult(posteriors, total, conj_value)


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x
