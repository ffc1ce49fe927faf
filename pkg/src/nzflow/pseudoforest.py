"""Pseudoforest machinery: (0,1)-orientations and the 5-valent partition
certificate that characterizes nowhere-zero Z3-flows.

A certificate is a bipartition (U, W) with both induced subgraphs
pseudoforests, transversals U' and W' (one vertex per tree component, none
per unicyclic component), and a perfect matching of the bipartite graph
between U' and W'.  ``flow_from_certificate`` and ``certificate_from_flow``
realize the two constructive directions; ``search_certificate`` decides
existence exhaustively on small graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from ._matching import hopcroft_karp
from .errors import (CapacityError, CertificateError, NormalizationError,
                     StructuralError, TransversalError)
from .flows import Z3Flow, normalize_to_unit, null_set, verify
from .graphs import Multigraph


@dataclass
class Component:
    kind: str  # "tree" | "unicyclic" | "other"
    vertices: list
    edge_ids: list
    cycle_vertices: list

    def __contains__(self, v) -> bool:
        return v in set(self.vertices)


@dataclass
class ComponentClassification:
    components: list[Component]

    @property
    def is_pseudoforest(self) -> bool:
        return all(c.kind != "other" for c in self.components)

    def kinds(self) -> list[str]:
        return [c.kind for c in self.components]

    def component_of(self, v) -> Component:
        for c in self.components:
            if v in c:
                return c
        raise StructuralError(f"vertex {v!r} not in any component")


def _component_cycle(graph: Multigraph, vertices: list, edge_ids: list) -> list:
    """The unique cycle of a unicyclic component, via leaf peeling."""
    deg = {v: 0 for v in vertices}
    alive_edges = set(edge_ids)
    for eid in edge_ids:
        e = graph.edge(eid)
        deg[e.u] += 1
        deg[e.v] += 1
    alive = set(vertices)
    queue = [v for v in vertices if deg[v] == 1]
    while queue:
        v = queue.pop()
        alive.discard(v)
        for eid in graph.incident(v):
            if eid in alive_edges:
                alive_edges.discard(eid)
                w = graph.edge(eid).other(v)
                if w in alive:
                    deg[w] -= 1
                    if deg[w] == 1:
                        queue.append(w)
    return sorted(alive)


def classify(graph: Multigraph) -> ComponentClassification:
    comps = []
    for verts in graph.components():
        vset = set(verts)
        eids = sorted(eid for eid, e in graph.edges.items() if e.u in vset)
        if len(eids) == len(verts) - 1:
            kind, cycle = "tree", []
        elif len(eids) == len(verts):
            kind = "unicyclic"
            cycle = _component_cycle(graph, verts, eids)
        else:
            kind, cycle = "other", []
        comps.append(Component(kind, verts, eids, cycle))
    return ComponentClassification(comps)


def _orient_tree_toward(graph: Multigraph, comp: Component, root) -> dict[int, tuple]:
    orientation = {}
    seen = {root}
    queue = [root]
    eset = set(comp.edge_ids)
    while queue:
        v = queue.pop()
        for eid in graph.incident(v):
            if eid in eset and eid not in orientation:
                w = graph.edge(eid).other(v)
                if w not in seen:
                    seen.add(w)
                    orientation[eid] = (w, v)  # toward the already-reached side
                    queue.append(w)
    return orientation


def _orient_cycle(graph: Multigraph, cycle: list) -> dict[int, tuple]:
    """Cyclic orientation of the cycle spanned by the given vertices."""
    cset = set(cycle)
    cycle_eids = sorted(
        eid for eid, e in graph.edges.items() if e.u in cset and e.v in cset)
    if len(cycle) == 2:
        e1, e2 = cycle_eids
        a, b = sorted(cycle)
        return {e1: (a, b), e2: (b, a)}
    orientation = {}
    start = min(cycle)
    v = start
    prev_eid = None
    while True:
        nxt = None
        for eid in graph.incident(v):
            if eid in cycle_eids and eid != prev_eid and eid not in orientation:
                nxt = eid
                break
        if nxt is None:
            break
        w = graph.edge(nxt).other(v)
        orientation[nxt] = (v, w)
        prev_eid = nxt
        v = w
        if v == start:
            break
    return orientation


def zero_one_orientation(graph: Multigraph, vprime: Iterable) -> dict[int, tuple]:
    """Orientation with out-degree 0 exactly on vprime, 1 elsewhere.

    Trees are oriented toward their unique vprime vertex; unicyclic
    components get a cyclic cycle and everything else pointing toward it.
    """
    vset = set(vprime)
    unknown = vset - set(graph.vertices)
    if unknown:
        raise TransversalError(f"unknown vertices in V': {sorted(unknown)!r}")
    cls = classify(graph)
    orientation: dict[int, tuple] = {}
    for comp in cls.components:
        hits = sorted(vset & set(comp.vertices))
        if comp.kind == "other":
            raise TransversalError("graph is not a pseudoforest")
        if comp.kind == "tree":
            if len(hits) != 1:
                raise TransversalError(
                    f"tree component {comp.vertices} needs exactly one V' vertex, "
                    f"got {hits}")
            orientation.update(_orient_tree_toward(graph, comp, hits[0]))
        else:
            if hits:
                raise TransversalError(
                    f"unicyclic component {comp.vertices} must avoid V', got {hits}")
            cyc = _orient_cycle(graph, comp.cycle_vertices)
            orientation.update(cyc)
            # remaining edges point toward the cycle
            seen = set(comp.cycle_vertices)
            queue = sorted(seen)
            eset = set(comp.edge_ids)
            while queue:
                v = queue.pop()
                for eid in graph.incident(v):
                    if eid in eset and eid not in orientation:
                        w = graph.edge(eid).other(v)
                        orientation[eid] = (w, v)
                        if w not in seen:
                            seen.add(w)
                            queue.append(w)
    return orientation


def out_degrees(graph: Multigraph, orientation: dict[int, tuple]) -> dict:
    out = {v: 0 for v in graph.vertices}
    for eid, (tail, _head) in orientation.items():
        out[tail] += 1
    return out


# -- matching ----------------------------------------------------------------


def bipartite_matching(graph: Multigraph, left: Iterable, right: Iterable
                       ) -> Optional[list[tuple]]:
    """Perfect matching of graph[left, right], or None.

    Deterministic under fixed input ordering (Hopcroft-Karp with sorted
    adjacency).
    """
    lset, rset = set(left), set(right)
    if lset & rset:
        raise StructuralError("matching sides must be disjoint")
    if len(lset) != len(rset):
        return None
    adj = {u: [] for u in lset}
    for e in graph.edges.values():
        if e.u in lset and e.v in rset:
            adj[e.u].append(e.v)
        elif e.v in lset and e.u in rset:
            adj[e.v].append(e.u)
    match = hopcroft_karp(adj)
    if len(match) != len(lset):
        return None
    return sorted(match.items())


# -- certificates -------------------------------------------------------------


@dataclass
class PartitionCertificate:
    U: list
    W: list
    U_prime: list
    W_prime: list
    matching: list[tuple]

    def __post_init__(self):
        self.U = sorted(self.U)
        self.W = sorted(self.W)
        self.U_prime = sorted(self.U_prime)
        self.W_prime = sorted(self.W_prime)
        self.matching = sorted(self.matching)

    def to_json_obj(self) -> dict:
        from .graphs import _vname
        return {
            "U": [_vname(v) for v in self.U],
            "W": [_vname(v) for v in self.W],
            "U_prime": [_vname(v) for v in self.U_prime],
            "W_prime": [_vname(v) for v in self.W_prime],
            "matching": [[_vname(u), _vname(w)] for u, w in self.matching],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PartitionCertificate":
        return cls(obj["U"], obj["W"], obj["U_prime"], obj["W_prime"],
                   [tuple(pair) for pair in obj["matching"]])


def _check_transversal(cls: ComponentClassification, tset: set, side: str):
    for comp in cls.components:
        hits = tset & set(comp.vertices)
        if comp.kind == "tree" and len(hits) != 1:
            raise CertificateError(
                f"{side}' must hit tree component {comp.vertices} exactly once, "
                f"got {sorted(hits)}")
        if comp.kind == "unicyclic" and hits:
            raise CertificateError(
                f"{side}' must avoid unicyclic component {comp.vertices}")


def validate_certificate(graph: Multigraph, cert: PartitionCertificate):
    """Raise CertificateError naming the violated invariant."""
    uset, wset = set(cert.U), set(cert.W)
    if not uset or not wset:
        raise CertificateError("U and W must be non-empty")
    if uset & wset:
        raise CertificateError("U and W must be disjoint")
    if uset | wset != set(graph.vertices):
        raise CertificateError("U and W must cover all vertices")
    cls_u = classify(graph.induced(uset))
    cls_w = classify(graph.induced(wset))
    if not cls_u.is_pseudoforest:
        raise CertificateError("induced graph on U is not a pseudoforest")
    if not cls_w.is_pseudoforest:
        raise CertificateError("induced graph on W is not a pseudoforest")
    upset, wpset = set(cert.U_prime), set(cert.W_prime)
    if not upset <= uset or not wpset <= wset:
        raise CertificateError("U' and W' must be subsets of U and W")
    _check_transversal(cls_u, upset, "U")
    _check_transversal(cls_w, wpset, "W")
    m_left = [u for u, _ in cert.matching]
    m_right = [w for _, w in cert.matching]
    if sorted(m_left) != cert.U_prime or sorted(m_right) != cert.W_prime:
        raise CertificateError("matching must pair U' with W' perfectly")
    for u, w in cert.matching:
        if not graph.edges_between(u, w):
            raise CertificateError(f"matching pair ({u!r}, {w!r}) is not an edge")


def flow_from_certificate(graph: Multigraph, cert: PartitionCertificate) -> Z3Flow:
    """All-ones nowhere-zero flow with out-degree 1 on U and 4 on W."""
    if not graph.is_regular(5):
        raise CertificateError("certificate flows require a 5-valent graph")
    validate_certificate(graph, cert)
    uset, wset = set(cert.U), set(cert.W)
    d_u = zero_one_orientation(graph.induced(uset), cert.U_prime)
    d_w = zero_one_orientation(graph.induced(wset), cert.W_prime)
    orientation = dict(d_u)
    orientation.update({eid: (h, t) for eid, (t, h) in d_w.items()})
    matched_ids = set()
    for u, w in cert.matching:
        eid = graph.edges_between(u, w)[0]
        orientation[eid] = (u, w)
        matched_ids.add(eid)
    for eid, e in graph.edges.items():
        if eid in orientation:
            continue
        if e.u in uset and e.v in wset:
            orientation[eid] = (e.v, e.u)
        elif e.u in wset and e.v in uset:
            orientation[eid] = (e.u, e.v)
        else:  # pragma: no cover - already covered by induced orientations
            raise CertificateError(f"edge {eid} not covered by the construction")
    flow = Z3Flow(orientation, {eid: 1 for eid in graph.edges})
    out = out_degrees(graph, orientation)
    for v in graph.vertices:
        want = 1 if v in uset else 4
        if out[v] != want:
            raise CertificateError(
                f"out-degree {out[v]} at {v!r}, expected {want}")
    result = verify(graph, flow)
    if not (result.valid and result.nowhere_zero):  # pragma: no cover
        raise CertificateError("constructed flow failed verification")
    return flow


def certificate_from_flow(graph: Multigraph, flow: Z3Flow) -> PartitionCertificate:
    """Recover (U, W, U', W', M) from a nowhere-zero flow on a 5-valent graph."""
    if not graph.is_regular(5):
        raise CertificateError("certificates are defined for 5-valent graphs")
    if null_set(flow):
        raise NormalizationError("flow must be nowhere-zero")
    res = verify(graph, flow)
    if not res.valid:
        raise CertificateError("flow must be valid")
    unit = normalize_to_unit(flow)
    out = out_degrees(graph, unit.orientation)
    U = sorted(v for v, d in out.items() if d == 1)
    W = sorted(v for v, d in out.items() if d == 4)
    if len(U) + len(W) != graph.num_vertices():
        raise CertificateError(f"out-degrees must be 1 or 4, got {sorted(set(out.values()))}")
    uset, wset = set(U), set(W)
    out_in_u = {v: 0 for v in U}
    in_in_w = {v: 0 for v in W}
    for eid, (tail, head) in unit.orientation.items():
        if tail in uset and head in uset:
            out_in_u[tail] += 1
        if tail in wset and head in wset:
            in_in_w[head] += 1
    u_prime = sorted(v for v in U if out_in_u[v] == 0)
    # for w in W, out-degree 0 in the reversed restriction = in-degree 0 here
    w_prime = sorted(v for v in W if in_in_w[v] == 0)
    matching = []
    for u in u_prime:
        heads = [head for eid, (tail, head) in unit.orientation.items() if tail == u]
        if len(heads) != 1 or heads[0] not in wset:
            raise CertificateError(
                f"vertex {u!r} in U' must have its single out-arc into W")
        matching.append((u, heads[0]))
    cert = PartitionCertificate(U, W, u_prime, w_prime, matching)
    validate_certificate(graph, cert)
    return cert


def certificate_for_partition(graph: Multigraph, U: Iterable, W: Iterable
                              ) -> Optional[PartitionCertificate]:
    """Complete (U, W) into a certificate, or None if impossible.

    Transversal existence reduces to a perfect matching between the tree
    components of the two induced pseudoforests (components adjacent when
    some graph edge joins them); one matched edge per pair is lifted to
    (U', W', M).
    """
    uset, wset = set(U), set(W)
    if not uset or not wset:
        return None
    cls_u = classify(graph.induced(uset))
    cls_w = classify(graph.induced(wset))
    if not (cls_u.is_pseudoforest and cls_w.is_pseudoforest):
        return None
    trees_u = [c for c in cls_u.components if c.kind == "tree"]
    trees_w = [c for c in cls_w.components if c.kind == "tree"]
    if len(trees_u) != len(trees_w):
        return None
    comp_u = {}
    for i, c in enumerate(trees_u):
        for v in c.vertices:
            comp_u[v] = i
    comp_w = {}
    for j, c in enumerate(trees_w):
        for v in c.vertices:
            comp_w[v] = j
    witness: dict[tuple[int, int], tuple] = {}
    for eid in sorted(graph.edges):
        e = graph.edges[eid]
        u, w = None, None
        if e.u in comp_u and e.v in comp_w:
            u, w = e.u, e.v
        elif e.v in comp_u and e.u in comp_w:
            u, w = e.v, e.u
        if u is None:
            continue
        key = (comp_u[u], comp_w[w])
        if key not in witness:
            witness[key] = (u, w)
    adj: dict[int, list[int]] = {i: [] for i in range(len(trees_u))}
    for (i, j) in witness:
        adj[i].append(j)
    match = hopcroft_karp(adj)
    if len(match) != len(trees_u):
        return None
    pairs = [witness[(i, j)] for i, j in sorted(match.items())]
    cert = PartitionCertificate(
        sorted(uset), sorted(wset),
        [u for u, _ in pairs], [w for _, w in pairs], pairs)
    validate_certificate(graph, cert)
    return cert


def search_certificate(graph: Multigraph, max_vertices: int = 16
                       ) -> Optional[PartitionCertificate]:
    """Exhaustive sweep over bipartitions of a 5-valent graph."""
    verts = graph.sorted_vertices()
    n = len(verts)
    if n == 0:
        return None
    if n > max_vertices:
        raise CapacityError(
            f"certificate search limited to {max_vertices} vertices, graph has {n}")
    rest = verts[1:]
    for mask in range(2 ** (n - 1)):
        U = [verts[0]] + [v for i, v in enumerate(rest) if mask >> i & 1]
        if len(U) == n:
            continue
        wset = [v for v in verts if v not in set(U)]
        cert = certificate_for_partition(graph, U, wset)
        if cert is not None:
            return cert
    return None
