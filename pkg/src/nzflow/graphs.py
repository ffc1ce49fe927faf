"""Loopless multigraphs, Cayley multigraph construction, and quotients.

Edges carry stable integer ids so orientations and flows can reference a
specific parallel edge; derived subgraphs keep the ids of their host graph.
Vertices are arbitrary hashable, mutually orderable values (group elements,
integers, strings, tuples).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

from .errors import ConnectionSetError, GraphError, QuotientError, StructuralError
from .groups import Element, FiniteGroup, TableGroup, left_cosets


@dataclass(frozen=True)
class Edge:
    id: int
    u: Hashable
    v: Hashable
    label: str = ""

    def endpoints(self) -> frozenset:
        return frozenset((self.u, self.v))

    def other(self, w: Hashable) -> Hashable:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise GraphError(f"vertex {w!r} is not an endpoint of edge {self.id}")


def _vname(v) -> str:
    return v.name if isinstance(v, Element) else str(v)


class Multigraph:
    def __init__(self, vertices: Iterable = ()):
        self._adj: dict[Hashable, list[int]] = {}
        self.edges: dict[int, Edge] = {}
        self._next_id = 0
        for v in vertices:
            self.add_vertex(v)

    # -- construction -----------------------------------------------------

    def add_vertex(self, v: Hashable):
        if v not in self._adj:
            self._adj[v] = []

    def add_edge(self, u: Hashable, v: Hashable, label: str = "",
                 eid: int | None = None) -> int:
        if u == v:
            raise GraphError(f"loops are not allowed (vertex {u!r})")
        if u not in self._adj or v not in self._adj:
            raise GraphError("both endpoints must be added as vertices first")
        if eid is None:
            eid = self._next_id
        if eid in self.edges:
            raise GraphError(f"duplicate edge id {eid}")
        self._next_id = max(self._next_id, eid + 1)
        e = Edge(eid, u, v, label)
        self.edges[eid] = e
        self._adj[u].append(eid)
        self._adj[v].append(eid)
        return eid

    # -- basic queries ----------------------------------------------------

    @property
    def vertices(self) -> list:
        return list(self._adj.keys())

    def sorted_vertices(self) -> list:
        return sorted(self._adj.keys())

    def has_vertex(self, v) -> bool:
        return v in self._adj

    def num_vertices(self) -> int:
        return len(self._adj)

    def num_edges(self) -> int:
        return len(self.edges)

    def edge(self, eid: int) -> Edge:
        try:
            return self.edges[eid]
        except KeyError:
            raise StructuralError(f"unknown edge id {eid}") from None

    def incident(self, v) -> list[int]:
        try:
            return sorted(self._adj[v])
        except KeyError:
            raise StructuralError(f"unknown vertex {v!r}") from None

    def degree(self, v) -> int:
        return len(self._adj[v])

    def neighbors(self, v) -> list:
        return sorted({self.edges[e].other(v) for e in self._adj[v]})

    def edges_between(self, u, v, label: str | None = None) -> list[int]:
        ids = [e for e in self._adj.get(u, ()) if self.edges[e].other(u) == v]
        if label is not None:
            ids = [e for e in ids if self.edges[e].label == label]
        return sorted(ids)

    def is_regular(self, d: int) -> bool:
        return all(len(ids) == d for ids in self._adj.values())

    # -- derived graphs (edge ids preserved) -------------------------------

    def induced(self, U: Iterable) -> "Multigraph":
        uset = set(U)
        unknown = uset - set(self._adj)
        if unknown:
            raise StructuralError(f"unknown vertices {sorted(map(_vname, unknown))}")
        sub = Multigraph(sorted(uset))
        for eid in sorted(self.edges):
            e = self.edges[eid]
            if e.u in uset and e.v in uset:
                sub.add_edge(e.u, e.v, e.label, eid=eid)
        return sub

    def bipartite_between(self, U: Iterable, W: Iterable) -> "Multigraph":
        uset, wset = set(U), set(W)
        if uset & wset:
            raise StructuralError("parts must be disjoint")
        sub = Multigraph(sorted(uset) + sorted(wset))
        for eid in sorted(self.edges):
            e = self.edges[eid]
            if (e.u in uset and e.v in wset) or (e.u in wset and e.v in uset):
                sub.add_edge(e.u, e.v, e.label, eid=eid)
        return sub

    def delete_edges(self, eids: Iterable[int]) -> "Multigraph":
        drop = set(eids)
        unknown = drop - set(self.edges)
        if unknown:
            raise StructuralError(f"unknown edge ids {sorted(unknown)}")
        sub = Multigraph(self.sorted_vertices())
        for eid in sorted(self.edges):
            if eid not in drop:
                e = self.edges[eid]
                sub.add_edge(e.u, e.v, e.label, eid=eid)
        return sub

    def subgraph_with_edges(self, eids: Iterable[int],
                            spanning: bool = True) -> "Multigraph":
        """Subgraph on the given edge ids; keeps all vertices if spanning."""
        keep = set(eids)
        unknown = keep - set(self.edges)
        if unknown:
            raise StructuralError(f"unknown edge ids {sorted(unknown)}")
        if spanning:
            verts = self.sorted_vertices()
        else:
            verts = sorted({w for eid in keep for w in self.edges[eid].endpoints()})
        sub = Multigraph(verts)
        for eid in sorted(keep):
            e = self.edges[eid]
            sub.add_edge(e.u, e.v, e.label, eid=eid)
        return sub

    # -- structure ----------------------------------------------------------

    def components(self) -> list[list]:
        seen = set()
        comps = []
        for v in self.sorted_vertices():
            if v in seen:
                continue
            comp = [v]
            seen.add(v)
            queue = [v]
            while queue:
                w = queue.pop()
                for eid in self._adj[w]:
                    z = self.edges[eid].other(w)
                    if z not in seen:
                        seen.add(z)
                        comp.append(z)
                        queue.append(z)
            comps.append(sorted(comp))
        return comps

    def is_even(self) -> bool:
        return all(len(ids) % 2 == 0 for ids in self._adj.values())

    def bipartition(self) -> tuple[list, list] | None:
        """A 2-colouring (sorted parts) or None if an odd cycle exists."""
        colour: dict = {}
        for start in self.sorted_vertices():
            if start in colour:
                continue
            colour[start] = 0
            queue = [start]
            while queue:
                w = queue.pop()
                for eid in self._adj[w]:
                    z = self.edges[eid].other(w)
                    if z not in colour:
                        colour[z] = 1 - colour[w]
                        queue.append(z)
                    elif colour[z] == colour[w]:
                        return None
        part0 = sorted(v for v, c in colour.items() if c == 0)
        part1 = sorted(v for v, c in colour.items() if c == 1)
        return part0, part1

    def is_bipartite(self) -> bool:
        return self.bipartition() is not None

    # -- equality / serialization ------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, Multigraph)
                and set(self._adj) == set(other._adj)
                and self.edges == other.edges)

    def __hash__(self):
        raise TypeError("Multigraph is not hashable")

    def to_json_obj(self) -> dict:
        names = {v: _vname(v) for v in self._adj}
        if len(set(names.values())) != len(names):
            raise StructuralError("vertex names are not unique")
        return {
            "vertices": sorted(names.values()),
            "edges": [
                {"id": e.id, "u": names[e.u], "v": names[e.v], "label": e.label}
                for e in (self.edges[i] for i in sorted(self.edges))
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Multigraph":
        g = cls(obj["vertices"])
        for rec in obj["edges"]:
            g.add_edge(rec["u"], rec["v"], rec.get("label", ""), eid=rec["id"])
        return g

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        names = {v: _vname(v) for v in self._adj}
        for v in sorted(names.values()):
            lines.append(f'  "{v}";')
        for eid in sorted(self.edges):
            e = self.edges[eid]
            u, v = sorted((names[e.u], names[e.v]))
            label = f' [label="{e.label}"]' if e.label else ""
            lines.append(f'  "{u}" -- "{v}"{label};')
        lines.append("}")
        return "\n".join(lines) + "\n"


class ConnectionMultiset:
    """Inverse-closed multiset of non-identity group elements."""

    def __init__(self, group: FiniteGroup, entries: dict[Element, int] | Iterable[Element]):
        if not isinstance(entries, dict):
            counted: dict[Element, int] = {}
            for x in entries:
                counted[x] = counted.get(x, 0) + 1
            entries = counted
        self.group = group
        self.entries = {x: m for x, m in entries.items() if m}
        for x, m in self.entries.items():
            if x.group.signature != group.signature:
                raise ConnectionSetError("connection element from a different group")
            if m < 0:
                raise ConnectionSetError("multiplicities must be positive")
            if x == group.identity:
                raise ConnectionSetError("identity is not allowed in a connection multiset")
            if self.entries.get(x.inv(), 0) != m:
                raise ConnectionSetError(
                    f"multiplicities of {x.name} and its inverse must be equal")

    def cardinality(self) -> int:
        """Valency contribution: total multiplicity."""
        return sum(self.entries.values())

    def classes(self) -> list[tuple[Element, int]]:
        """Generator classes {x, x^-1} as (canonical rep, multiplicity)."""
        out = []
        seen = set()
        for x in sorted(self.entries):
            if x in seen:
                continue
            xi = x.inv()
            seen.add(x)
            seen.add(xi)
            out.append((min(x, xi), self.entries[x]))
        return out

    def __contains__(self, x: Element) -> bool:
        return x in self.entries

    def __eq__(self, other) -> bool:
        return (isinstance(other, ConnectionMultiset)
                and self.group.signature == other.group.signature
                and self.entries == other.entries)


class CayleyMultigraph(Multigraph):
    """Multigraph on a group; edges are {g, gx} grouped in x/x^-1 label classes."""

    def __init__(self, group: FiniteGroup, connection: ConnectionMultiset):
        super().__init__(group.elements())
        self.group = group
        self.connection = connection


def cayley(group: FiniteGroup, connection, labels: dict[Element, str] | None = None
           ) -> CayleyMultigraph:
    """Cayley multigraph Cay(G, X): g ~ gx for every x in X, with multiplicity.

    ``labels`` optionally names generator classes (applies to x and x^-1).
    """
    if not isinstance(connection, ConnectionMultiset):
        connection = ConnectionMultiset(group, connection)
    graph = CayleyMultigraph(group, connection)
    labels = labels or {}
    for rep, mult in connection.classes():
        label = labels.get(rep) or labels.get(rep.inv()) or rep.name
        involution = rep.inv() == rep
        for g in group.elements():
            h = g * rep
            if involution and not g < h:
                continue
            for _ in range(mult):
                graph.add_edge(g, h, label)
    return graph


class QuotientGroup(TableGroup):
    """Group of cosets G/N; remembers the projection from the parent group."""

    def __init__(self, parent: FiniteGroup, normal: Iterable[Element]):
        nset = set(normal)
        if parent.identity not in nset:
            raise QuotientError("subgroup must contain the identity")
        for n1 in nset:
            for n2 in nset:
                if n1 * n2 not in nset:
                    raise QuotientError("N is not closed under multiplication")
        for g in parent.elements():
            gi = g.inv()
            for n in nset:
                if (gi * n) * g not in nset:
                    raise QuotientError("N is not normal")
        cosets = left_cosets(parent, nset)
        reps = [c[0] for c in cosets]
        index_of = {}
        for i, coset in enumerate(cosets):
            for g in coset:
                index_of[g] = i
        table = [[index_of[ri * rj] for rj in reps] for ri in reps]
        names = [f"[{reps[i].name}]" for i in range(len(reps))]
        super().__init__(table, identity=index_of[parent.identity], names=names)
        self.parent_group = parent
        self.coset_reps = reps
        self._index_of = index_of

    def project(self, g: Element) -> Element:
        return self.element(self._index_of[g])


def quotient(graph: CayleyMultigraph, normal: Iterable[Element]) -> CayleyMultigraph:
    """Quotient Cayley multigraph Cay(G/N, X/N); requires N normal, N disjoint
    from the connection multiset."""
    nset = set(normal)
    q = QuotientGroup(graph.group, nset)
    for x in graph.connection.entries:
        if x in nset:
            raise QuotientError(f"connection element {x.name} lies in N")
    entries: dict[Element, int] = {}
    for x, m in graph.connection.entries.items():
        img = q.project(x)
        entries[img] = entries.get(img, 0) + m
    qconn = ConnectionMultiset(q, entries)
    return cayley(q, qconn)


# -- predicates -------------------------------------------------------------


def is_even(graph: Multigraph) -> bool:
    return graph.is_even()


def is_bipartite(graph: Multigraph) -> bool:
    return graph.is_bipartite()


def components(graph: Multigraph) -> list[list]:
    return graph.components()


def is_parity_subgraph(sub: Multigraph, graph: Multigraph) -> bool:
    """True iff removing E(sub) from graph leaves every degree even."""
    for eid, e in sub.edges.items():
        host = graph.edges.get(eid)
        if host is None or host.endpoints() != e.endpoints():
            raise StructuralError(f"edge {eid} of the subgraph is not in the host graph")
    subdeg: dict = {}
    for e in sub.edges.values():
        subdeg[e.u] = subdeg.get(e.u, 0) + 1
        subdeg[e.v] = subdeg.get(e.v, 0) + 1
    return all((graph.degree(v) - subdeg.get(v, 0)) % 2 == 0 for v in graph.vertices)


def _edge_counter(graph: Multigraph, vertices: set) -> dict:
    counts: dict = {}
    for e in graph.edges.values():
        if e.u in vertices and e.v in vertices:
            key = frozenset((e.u, e.v))
            counts[key] = counts.get(key, 0) + 1
    return counts


def translation_isomorphic(graph: CayleyMultigraph, U: Iterable, g: Element) -> bool:
    """True iff left multiplication by g maps the subgraph induced on U
    edge-exactly onto the subgraph induced on gU."""
    uset = set(U)
    image = {g * u for u in uset}
    if len(image) != len(uset):
        return False
    src = _edge_counter(graph, uset)
    dst = _edge_counter(graph, image)
    mapped = {frozenset(g * w for w in key): m for key, m in src.items()}
    return mapped == dst
