"""Z3-flows: verification, transforms, the exhaustive oracle, and lifts.

A flow is an orientation (edge id -> (tail, head)) plus values in {0,1,2};
it is valid when at every vertex the oriented values sum to zero mod 3, and
nowhere-zero when no value is 0.  ``verify`` is the single source of truth:
every constructor in this package re-verifies what it builds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import oracle
from ._matching import hopcroft_karp
from .errors import (CapacityError, LiftError, NormalizationError,
                     ParameterError, ParityError, StructuralError)
from .graphs import (CayleyMultigraph, ConnectionMultiset, Multigraph,
                     is_parity_subgraph, quotient)
from .groups import Element, FiniteGroup


@dataclass
class Z3Flow:
    orientation: dict[int, tuple] = field(default_factory=dict)
    values: dict[int, int] = field(default_factory=dict)

    def edge_ids(self) -> set[int]:
        return set(self.orientation)

    def copy(self) -> "Z3Flow":
        return Z3Flow(dict(self.orientation), dict(self.values))

    def update(self, other: "Z3Flow"):
        self.orientation.update(other.orientation)
        self.values.update(other.values)

    def to_json_obj(self) -> dict:
        from .graphs import _vname
        return {
            "orientation": [
                {"edge": eid, "tail": _vname(t), "head": _vname(h)}
                for eid, (t, h) in sorted(self.orientation.items())
            ],
            "values": [
                {"edge": eid, "value": self.values[eid]}
                for eid in sorted(self.values)
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Z3Flow":
        orientation = {rec["edge"]: (rec["tail"], rec["head"])
                       for rec in obj["orientation"]}
        values = {rec["edge"]: rec["value"] for rec in obj["values"]}
        return cls(orientation, values)


@dataclass
class VerifyResult:
    valid: bool
    nowhere_zero: bool
    violations: list


def verify(graph: Multigraph, flow: Z3Flow) -> VerifyResult:
    """Check conservation mod 3 at every vertex; mismatched edge ids raise."""
    if set(flow.orientation) != set(graph.edges) or set(flow.values) != set(graph.edges):
        raise StructuralError("flow must cover exactly the edges of the graph")
    net = {v: 0 for v in graph.vertices}
    nowhere_zero = True
    for eid, (tail, head) in flow.orientation.items():
        e = graph.edge(eid)
        if frozenset((tail, head)) != e.endpoints():
            raise StructuralError(
                f"orientation of edge {eid} does not match its endpoints")
        val = flow.values[eid]
        if val not in (0, 1, 2):
            raise StructuralError(f"edge {eid} has value {val!r} outside Z3")
        if val == 0:
            nowhere_zero = False
        net[tail] += val
        net[head] -= val
    violations = sorted((v for v in net if net[v] % 3 != 0))
    return VerifyResult(valid=not violations, nowhere_zero=nowhere_zero,
                        violations=violations)


# -- transforms ---------------------------------------------------------------


def reverse(flow: Z3Flow) -> Z3Flow:
    return Z3Flow({eid: (h, t) for eid, (t, h) in flow.orientation.items()},
                  dict(flow.values))


def negate(flow: Z3Flow) -> Z3Flow:
    return Z3Flow(dict(flow.orientation),
                  {eid: (-v) % 3 for eid, v in flow.values.items()})


def null_set(flow: Z3Flow) -> set[int]:
    return {eid for eid, v in flow.values.items() if v == 0}


def normalize_to_unit(flow: Z3Flow) -> Z3Flow:
    """All-ones flow on the same graph: value-2 edges are reversed (2 = -1)."""
    if null_set(flow):
        raise NormalizationError("cannot normalize a flow with zero values")
    orientation = {}
    for eid, (t, h) in flow.orientation.items():
        orientation[eid] = (t, h) if flow.values[eid] == 1 else (h, t)
    return Z3Flow(orientation, {eid: 1 for eid in flow.values})


# -- even graphs and the oracle ----------------------------------------------


def even_graph_flow(graph: Multigraph) -> Z3Flow:
    """All-ones flow from Euler circuits, one per component.

    Each circuit visits a vertex as often inward as outward, so orienting
    every circuit forward conserves the constant value 1.
    """
    odd = [v for v in graph.sorted_vertices() if graph.degree(v) % 2]
    if odd:
        raise ParityError(f"graph has odd-degree vertices, e.g. {odd[0]!r}")
    flow = Z3Flow()
    unused: dict = {v: list(graph.incident(v))[::-1] for v in graph.vertices}
    used = set()
    for start in graph.sorted_vertices():
        if not unused[start] or all(e in used for e in unused[start]):
            continue
        # Hierholzer walk; arcs are recorded as (tail, edge) pairs.
        stack: list[tuple] = [(start, None)]
        walk_edges: list[tuple] = []
        while stack:
            v, via = stack[-1]
            nxt = None
            while unused[v]:
                cand = unused[v][-1]
                if cand in used:
                    unused[v].pop()
                    continue
                nxt = cand
                break
            if nxt is None:
                stack.pop()
                if via is not None:
                    walk_edges.append((stack[-1][0], via))
            else:
                used.add(nxt)
                unused[v].pop()
                stack.append((graph.edge(nxt).other(v), nxt))
        for tail, eid in reversed(walk_edges):
            flow.orientation[eid] = (tail, graph.edge(eid).other(tail))
            flow.values[eid] = 1
    return flow


def oracle_nz3(graph: Multigraph, max_edges: int = 60) -> Z3Flow | None:
    """Exhaustive decision procedure: a verified nowhere-zero Z3-flow or None.

    Searches mod-3 orientations (equivalent to all-ones flows, hence to any
    nowhere-zero Z3-flow up to normalization).  Deterministic.
    """
    if graph.num_edges() > max_edges:
        raise CapacityError(
            f"oracle limited to {max_edges} edges, graph has {graph.num_edges()}")
    orientation = oracle.mod3_orientation(graph)
    if orientation is None:
        return None
    flow = Z3Flow(orientation, {eid: 1 for eid in orientation})
    result = verify(graph, flow)
    if not (result.valid and result.nowhere_zero):
        raise StructuralError("oracle produced an invalid flow")  # pragma: no cover
    return flow


# -- lifting constructions -----------------------------------------------------


def parity_lift(graph: Multigraph, sub: Multigraph, flow: Z3Flow) -> Z3Flow:
    """Extend a nowhere-zero flow on a parity subgraph to the whole graph."""
    if not is_parity_subgraph(sub, graph):
        raise LiftError("sub is not a parity subgraph of the host graph")
    res = verify(sub, flow)
    if not (res.valid and res.nowhere_zero):
        raise LiftError("flow on the parity subgraph must be valid and nowhere-zero")
    rest = graph.delete_edges(sub.edges.keys())
    lifted = flow.copy()
    lifted.update(even_graph_flow(rest))
    return lifted


def quotient_lift(graph: CayleyMultigraph, normal: Iterable[Element],
                  qflow: Z3Flow) -> Z3Flow:
    """Pull a nowhere-zero flow back from Cay(G/N, X/N) to Cay(G, X).

    The projection is a covering map: for every vertex g and coset pair the
    incident edges upstairs biject with the parallel bundle downstairs.  For
    bundles of multiplicity m the fibre is an m-regular bipartite multigraph,
    decomposed into m perfect matchings, one per parallel edge.
    """
    qgraph = quotient(graph, normal)
    if set(qflow.orientation) != set(qgraph.edges):
        raise LiftError("flow does not match quotient(graph, N)")
    res = verify(qgraph, qflow)
    if not (res.valid and res.nowhere_zero):
        raise LiftError("quotient flow must be valid and nowhere-zero")
    project = qgraph.group.project

    bundles: dict[frozenset, list[int]] = {}
    for eid, e in qgraph.edges.items():
        bundles.setdefault(e.endpoints(), []).append(eid)
    fibers: dict[frozenset, list[int]] = {}
    for eid, e in graph.edges.items():
        fibers.setdefault(frozenset((project(e.u), project(e.v))), []).append(eid)

    flow = Z3Flow()
    for key, down_ids in sorted(bundles.items(), key=lambda kv: sorted(kv[1])):
        down_ids = sorted(down_ids)
        up_ids = sorted(fibers.get(key, []))
        if len(up_ids) != len(down_ids) * (graph.group.order // qgraph.group.order):
            raise LiftError("fibre size mismatch; quotient does not cover the graph")
        remaining = set(up_ids)
        for round_idx, qeid in enumerate(down_ids):
            if len(down_ids) == 1:
                chosen = sorted(remaining)
            else:
                adj: dict = {}
                side = min(key)
                for eid in sorted(remaining):
                    e = graph.edge(eid)
                    u = e.u if project(e.u) == side else e.v
                    adj.setdefault(u, []).append((e.other(u), eid))
                match = hopcroft_karp(
                    {u: [w for w, _ in pairs] for u, pairs in adj.items()})
                if len(match) != len(adj):
                    raise LiftError("fibre decomposition failed")  # pragma: no cover
                chosen = []
                for u, w in match.items():
                    eid = min(eid for (z, eid) in adj[u] if z == w and eid in remaining)
                    chosen.append(eid)
            qtail, qhead = qflow.orientation[qeid]
            for eid in chosen:
                remaining.discard(eid)
                e = graph.edge(eid)
                tail, head = (e.u, e.v) if project(e.u) == qtail else (e.v, e.u)
                flow.orientation[eid] = (tail, head)
                flow.values[eid] = qflow.values[qeid]
    result = verify(graph, flow)
    if not (result.valid and result.nowhere_zero):
        raise LiftError("lifted flow failed verification")  # pragma: no cover
    return flow


# -- five-valent multiset construction -----------------------------------------


def multiset_flow(group: FiniteGroup, connection) -> Z3Flow:
    """Nowhere-zero Z3-flow on Cay(A, Y) for Y = {y, y^-1, z, z, z'}.

    Requires an element y of order > 2 with multiplicity 1; z and z' are
    involutions (z = z' allowed, giving z multiplicity 3).  Returns a flow
    on ``cayley(group, connection)`` built per the two shapes:

    * z = z': orient the y-cycles cyclically and each parallel triple
      identically; every edge gets value 1 (triples contribute 3 = 0 mod 3).
    * z != z': take an Euler-circuit flow on the even 4-valent subgraph
      Cay(A, {y, y^-1, z, z'}) and double the z-edges with negated value
      (phi and -2*phi agree mod 3).
    """
    from .graphs import cayley  # deferred to keep import graph acyclic

    if not isinstance(connection, ConnectionMultiset):
        connection = ConnectionMultiset(group, connection)
    if connection.cardinality() != 5:
        raise ParameterError("connection multiset must have cardinality 5")
    ys = [(x, m) for x, m in sorted(connection.entries.items()) if x.inv() != x]
    invs = [(x, m) for x, m in sorted(connection.entries.items()) if x.inv() == x]
    if len(ys) != 2 or ys[0][1] != 1:
        raise ParameterError(
            "need exactly one generator pair {y, y^-1} of multiplicity 1")
    y = ys[0][0]
    total_inv = sum(m for _, m in invs)
    if total_inv != 3:
        raise ParameterError("involutions must contribute total multiplicity 3")

    if len(invs) == 2 and sorted(m for _, m in invs) != [1, 2]:
        raise ParameterError("two distinct involutions must have multiplicities 2 and 1")
    if len(invs) > 2:
        raise ParameterError("at most two distinct involutions are allowed")

    graph = cayley(group, connection)
    flow = Z3Flow()
    y_label = min(y, y.inv()).name
    if len(invs) == 1:
        # z = z': y-cycles plus parallel triples, all value 1.
        for eid in sorted(graph.edges):
            e = graph.edge(eid)
            if e.label == y_label:
                # created as (g, g*y): orient forward along the y-cycle
                flow.orientation[eid] = (e.u, e.v)
            else:
                flow.orientation[eid] = (min(e.u, e.v), max(e.u, e.v))
            flow.values[eid] = 1
    else:
        z = min(x for x, m in invs if m == 2)
        sub_ids = []
        pair_of: dict[int, int] = {}
        seen_pairs: dict[frozenset, int] = {}
        for eid in sorted(graph.edges):
            e = graph.edge(eid)
            if e.label == z.name:
                first = seen_pairs.get(e.endpoints())
                if first is None:
                    seen_pairs[e.endpoints()] = eid
                    sub_ids.append(eid)
                else:
                    pair_of[first] = eid
            else:
                sub_ids.append(eid)
        sub = graph.subgraph_with_edges(sub_ids)
        base = even_graph_flow(sub)
        for eid in sub_ids:
            tail_head = base.orientation[eid]
            val = base.values[eid]
            if eid in pair_of:
                other = pair_of[eid]
                flow.orientation[eid] = tail_head
                flow.orientation[other] = tail_head
                flow.values[eid] = (-val) % 3
                flow.values[other] = (-val) % 3
            else:
                flow.orientation[eid] = tail_head
                flow.values[eid] = val
    result = verify(graph, flow)
    if not (result.valid and result.nowhere_zero):
        raise StructuralError("multiset flow failed verification")  # pragma: no cover
    return flow
