"""Dense factors over binary variables, plus min-degree elimination ordering.

A factor stores its scope as a sorted tuple of node ids and its table as a
flat list of 2**k floats; bit i of a table index is the state of scope
variable i. Everything here is deterministic: scopes are kept sorted and
ordering ties break on ascending id.
"""

from __future__ import annotations


class Factor:
    __slots__ = ("scope", "values")

    def __init__(self, scope: tuple[str, ...], values: list[float]):
        self.scope = scope
        self.values = values

    def __repr__(self) -> str:
        return f"Factor({self.scope}, {len(self.values)} entries)"


def multiply(f: Factor, g: Factor) -> Factor:
    if not f.scope:
        return Factor(g.scope, [v * f.values[0] for v in g.values])
    if not g.scope:
        return Factor(f.scope, [v * g.values[0] for v in f.values])
    scope = tuple(sorted(set(f.scope) | set(g.scope)))
    f_pos = [scope.index(v) for v in f.scope]
    g_pos = [scope.index(v) for v in g.scope]
    fv, gv = f.values, g.values
    out = [0.0] * (1 << len(scope))
    for idx in range(len(out)):
        fi = 0
        for bit, pos in enumerate(f_pos):
            fi |= ((idx >> pos) & 1) << bit
        gi = 0
        for bit, pos in enumerate(g_pos):
            gi |= ((idx >> pos) & 1) << bit
        out[idx] = fv[fi] * gv[gi]
    return Factor(scope, out)


def sum_out(f: Factor, var: str) -> Factor:
    pos = f.scope.index(var)
    scope = f.scope[:pos] + f.scope[pos + 1 :]
    low_mask = (1 << pos) - 1
    values = f.values
    out = [0.0] * (1 << len(scope))
    for idx in range(len(out)):
        base = (idx & low_mask) | ((idx & ~low_mask) << 1)
        out[idx] = values[base] + values[base | (1 << pos)]
    return Factor(scope, out)


def min_degree_order(variables, scopes) -> list[str]:
    """Elimination order by repeated minimum degree over the interaction
    graph induced by the factor scopes, ids ascending on ties. Neighbors of
    an eliminated variable are connected (fill-in) before it is removed."""
    neighbors: dict[str, set[str]] = {v: set() for v in variables}
    var_set = set(variables)
    for scope in scopes:
        present = [v for v in scope if v in var_set]
        for i, a in enumerate(present):
            for b in present[i + 1 :]:
                neighbors[a].add(b)
                neighbors[b].add(a)
    order: list[str] = []
    remaining = set(variables)
    while remaining:
        best = min(remaining, key=lambda v: (len(neighbors[v] & remaining), v))
        order.append(best)
        nbrs = [v for v in neighbors[best] if v in remaining and v != best]
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1 :]:
                neighbors[a].add(b)
                neighbors[b].add(a)
        remaining.discard(best)
    return order
