"""Closed ladders (circular and Moebius), their Z3-flows, and the
spanning-ladder composition that welds per-component flows onto a shared
subgraph flow.

Circular ladder CL_t: two rails of length t joined by t rungs (2t vertices,
3t edges; for t = 2 the rails are doubled).  Moebius ladder M_t: a single
2t-cycle of rails with t antipodal rungs.  A cubic graph has a nowhere-zero
Z3-flow iff it is bipartite, which for ladders means: CL_t iff t is even,
M_t iff t is odd.  In the non-bipartite cases there is still a Z3-flow
vanishing on exactly one prescribed rung; ``*_null_rung`` builds it
explicitly (rails as two directed cycles, rung values alternating 1,2
around from the zero rung).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError, PlanError
from .flows import Z3Flow, negate, null_set, reverse, verify
from .graphs import Multigraph, is_parity_subgraph


@dataclass
class Ladder:
    kind: str  # "circular" | "mobius"
    t: int
    graph: Multigraph
    rung_ids: list[int]
    rail_ids: list[int]
    # circular: vertex (pos, side) = pos + t*side; rung i joins i and t+i.
    # mobius: vertices 0..2t-1; rung i joins i and t+i.


def make_ladder(kind: str, t: int) -> Ladder:
    if t < 2:
        raise ParameterError(f"ladders need at least 2 rungs, got t={t}")
    if kind not in ("circular", "mobius"):
        raise ParameterError(f"unknown ladder kind {kind!r}")
    g = Multigraph(range(2 * t))
    rails, rungs = [], []
    if kind == "circular":
        # for t = 2 the rail cycle C_2 degenerates to a doubled edge, which
        # the generic loop produces as two parallel rails
        for side in (0, 1):
            base = side * t
            for i in range(t):
                rails.append(g.add_edge(base + i, base + (i + 1) % t, "rail"))
        for i in range(t):
            rungs.append(g.add_edge(i, t + i, "rung"))
    else:
        for i in range(2 * t):
            rails.append(g.add_edge(i, (i + 1) % (2 * t), "rail"))
        for i in range(t):
            rungs.append(g.add_edge(i, t + i, "rung"))
    return Ladder(kind, t, g, rungs, rails)


def ladder_flow(ladder: Ladder) -> Z3Flow | None:
    """Nowhere-zero Z3-flow when the ladder is bipartite (cubic criterion)."""
    parts = ladder.graph.bipartition()
    if parts is None:
        return None
    part0 = set(parts[0])
    orientation = {}
    for eid, e in ladder.graph.edges.items():
        orientation[eid] = (e.u, e.v) if e.u in part0 else (e.v, e.u)
    return Z3Flow(orientation, {eid: 1 for eid in ladder.graph.edges})


def _cl_pattern(t: int, q: int):
    """Values for CL_t with the zero rung at position q (t odd).

    Returns (rung_val, rail_val) callables over positions; rails run
    pos -> pos+1 on both sides, rungs run side 0 -> side 1.
    """
    def rung_val(pos: int) -> int:
        d = (pos - q) % t
        if d == 0:
            return 0
        return 1 if d % 2 == 1 else 2

    def rail_val(pos: int, side: int) -> int:
        d = (pos - q) % t
        if side == 0:
            return 2 if d % 2 == 0 else 1
        return 1 if d % 2 == 0 else 2

    return rung_val, rail_val


def circular_null_rung_flow(t: int, q: int, vert_at, rung_id_at, rail_id_at) -> Z3Flow:
    """Null-rung flow on an embedded CL_t.

    ``vert_at(pos, side)``, ``rung_id_at(pos)`` and ``rail_id_at(pos, side)``
    describe the embedding; the rail at (pos, side) joins pos and pos+1.
    """
    if t % 2 == 0:
        raise ParameterError("null-rung flows on circular ladders need odd t")
    rung_val, rail_val = _cl_pattern(t, q)
    flow = Z3Flow()
    for pos in range(t):
        eid = rung_id_at(pos)
        flow.orientation[eid] = (vert_at(pos, 0), vert_at(pos, 1))
        flow.values[eid] = rung_val(pos)
        for side in (0, 1):
            eid = rail_id_at(pos, side)
            flow.orientation[eid] = (vert_at(pos, side), vert_at((pos + 1) % t, side))
            flow.values[eid] = rail_val(pos, side)
    return flow


def mobius_null_rung_flow(ladder: Ladder, q: int) -> Z3Flow:
    """Null-rung flow on M_t for even t; zero exactly on rung q."""
    t = ladder.t
    if t % 2 == 1:
        raise ParameterError("null-rung flows on Moebius ladders need even t")
    flow = Z3Flow()
    for v in range(2 * t):
        w = (v - q) % (2 * t)
        eid = ladder.rail_ids[v]
        if w < t:
            val = 2 if w % 2 == 0 else 1
        else:
            val = 1 if w % 2 == 0 else 2
        flow.orientation[eid] = (v, (v + 1) % (2 * t))
        flow.values[eid] = val
    for j in range(t):
        tail = (q + j) % (2 * t)
        head = (tail + t) % (2 * t)
        eid = ladder.rung_ids[tail % t]
        flow.orientation[eid] = (tail, head)
        flow.values[eid] = 0 if j == 0 else (1 if j % 2 == 1 else 2)
    return flow


def ladder_flow_null_rung(ladder: Ladder, rung_eid: int) -> Z3Flow:
    """Z3-flow whose null set is exactly the chosen rung.

    Only defined in the non-bipartite cases (odd circular, even Moebius).
    """
    if rung_eid not in ladder.rung_ids:
        raise ParameterError(f"edge {rung_eid} is not a rung")
    q = ladder.rung_ids.index(rung_eid)
    if ladder.kind == "circular":
        if ladder.t % 2 == 0:
            raise ParameterError(
                "even circular ladders admit a nowhere-zero flow; "
                "null-rung flows are for the odd case")
        t = ladder.t
        flow = circular_null_rung_flow(
            t, q,
            lambda pos, side: pos + t * side,
            lambda pos: ladder.rung_ids[pos],
            lambda pos, side: ladder.rail_ids[side * t + pos],
        )
    else:
        if ladder.t % 2 == 1:
            raise ParameterError(
                "odd Moebius ladders admit a nowhere-zero flow; "
                "null-rung flows are for the even case")
        flow = mobius_null_rung_flow(ladder, q)
    result = verify(ladder.graph, flow)
    if not result.valid or null_set(flow) != {rung_eid}:  # pragma: no cover
        raise ParameterError("null-rung construction failed")
    return flow


# -- spanning-ladder composition ------------------------------------------------


@dataclass
class LadderComponent:
    """A circular ladder CL_t embedded in a host graph.

    ``vert_at[(pos, side)]`` lists the 2t vertices; ``rung_id_at[pos]`` and
    ``rail_id_at[(pos, side)]`` give host edge ids (the rail at (pos, side)
    joins positions pos and pos+1 mod t on that side).
    """
    t: int
    vert_at: dict[tuple, object]
    rung_id_at: dict[int, int]
    rail_id_at: dict[tuple, int]

    def vertices(self) -> list:
        return sorted(self.vert_at.values())

    def edge_ids(self) -> set[int]:
        return set(self.rung_id_at.values()) | set(self.rail_id_at.values())


@dataclass
class LadderPlan:
    """Ingredients of the composition: a spanning disjoint union of odd
    circular ladders, a subgraph lam sharing only rungs with them, and a
    Z3-flow on lam whose zeros hide inside the shared rungs, at most one
    per component."""
    graph: Multigraph
    t: int
    components: list[LadderComponent]
    lam: Multigraph
    lam_flow: Z3Flow

    def sigma_edge_ids(self) -> set[int]:
        out: set[int] = set()
        for comp in self.components:
            out |= comp.edge_ids()
        return out

    def shared_edge_ids(self, comp: LadderComponent) -> list[int]:
        return sorted(comp.edge_ids() & set(self.lam.edges))


def _validate_component(graph: Multigraph, comp: LadderComponent, t: int):
    if comp.t != t:
        raise PlanError(f"(i) component t={comp.t} differs from plan t={t}")
    coords = [(pos, side) for side in (0, 1) for pos in range(t)]
    if sorted(comp.vert_at) != sorted(coords):
        raise PlanError("(i) component coordinates must cover CL_t")
    verts = set(comp.vert_at.values())
    if len(verts) != 2 * t:
        raise PlanError("(i) component vertices must be distinct")
    for pos in range(t):
        e = graph.edge(comp.rung_id_at[pos])
        if e.endpoints() != frozenset((comp.vert_at[(pos, 0)], comp.vert_at[(pos, 1)])):
            raise PlanError(f"(i) rung at position {pos} has wrong endpoints")
        for side in (0, 1):
            e = graph.edge(comp.rail_id_at[(pos, side)])
            want = frozenset((comp.vert_at[(pos, side)],
                              comp.vert_at[((pos + 1) % t, side)]))
            if e.endpoints() != want:
                raise PlanError(f"(i) rail at {(pos, side)} has wrong endpoints")
    ids = list(comp.rung_id_at.values()) + list(comp.rail_id_at.values())
    if len(set(ids)) != 3 * t:
        raise PlanError("(i) component edges must be distinct")


def validate_plan(plan: LadderPlan):
    """Check the four composition hypotheses, raising PlanError with the
    failing condition."""
    t = plan.t
    if t % 2 == 0 or t < 3:
        raise PlanError(f"(i) t must be an odd integer > 1, got {t}")
    covered: set = set()
    for comp in plan.components:
        _validate_component(plan.graph, comp, t)
        verts = set(comp.vert_at.values())
        if covered & verts:
            raise PlanError("(i) components must be vertex-disjoint")
        covered |= verts
    if covered != set(plan.graph.vertices):
        raise PlanError("(i) components must span the host graph")

    union_ids = plan.sigma_edge_ids() | set(plan.lam.edges)
    union = plan.graph.subgraph_with_edges(union_ids)
    if not is_parity_subgraph(union, plan.graph):
        raise PlanError("(ii) sigma union lam is not a parity subgraph")

    for idx, comp in enumerate(plan.components):
        shared = plan.shared_edge_ids(comp)
        if len(shared) not in (1, 2):
            raise PlanError(
                f"(iii) component {idx} shares {len(shared)} edges, need 1 or 2")
        rungs = set(comp.rung_id_at.values())
        for eid in shared:
            if eid not in rungs:
                raise PlanError(f"(iii) shared edge {eid} of component {idx} "
                                "is not a rung")

    res = verify(plan.lam, plan.lam_flow)
    if not res.valid:
        raise PlanError("(iv) lam flow is not a valid Z3-flow")
    zeros = null_set(plan.lam_flow)
    sigma_ids = plan.sigma_edge_ids()
    if not zeros <= sigma_ids:
        raise PlanError("(iv)(a) lam flow vanishes outside the shared edges")
    for idx, comp in enumerate(plan.components):
        shared = set(plan.shared_edge_ids(comp))
        if shared <= zeros:
            raise PlanError(
                f"(iv)(b) all shared edges of component {idx} are in the null set")


def compose(plan: LadderPlan) -> Z3Flow:
    """Nowhere-zero Z3-flow on sigma union lam.

    Per component: build the null-rung flow vanishing on a shared rung with
    nonzero lam value, reverse it if needed to agree with the lam
    orientation on the other shared edge, negate it if the values there
    would cancel, then sum the two flows edge-wise.
    """
    validate_plan(plan)
    lam_flow = plan.lam_flow
    merged = Z3Flow(dict(lam_flow.orientation), dict(lam_flow.values))
    for comp in plan.components:
        shared = plan.shared_edge_ids(comp)
        nonzero = [eid for eid in shared if lam_flow.values[eid] != 0]
        e_i = nonzero[0]
        e_other = next((eid for eid in shared if eid != e_i), None)
        pos_of = {eid: pos for pos, eid in comp.rung_id_at.items()}
        comp_flow = circular_null_rung_flow(
            comp.t, pos_of[e_i],
            lambda pos, side: comp.vert_at[(pos, side)],
            lambda pos: comp.rung_id_at[pos],
            lambda pos, side: comp.rail_id_at[(pos, side)],
        )
        if e_other is not None and \
                comp_flow.orientation[e_other] != lam_flow.orientation[e_other]:
            comp_flow = reverse(comp_flow)
        comp_flow.orientation[e_i] = lam_flow.orientation[e_i]
        if e_other is not None and \
                (lam_flow.values[e_other] + comp_flow.values[e_other]) % 3 == 0:
            comp_flow = negate(comp_flow)
        for eid in comp.edge_ids():
            if eid in merged.orientation:
                if merged.orientation[eid] != comp_flow.orientation[eid]:  # pragma: no cover
                    raise PlanError("orientations disagree on a shared edge")
                merged.values[eid] = (merged.values[eid] + comp_flow.values[eid]) % 3
            else:
                merged.orientation[eid] = comp_flow.orientation[eid]
                merged.values[eid] = comp_flow.values[eid]
    union = plan.graph.subgraph_with_edges(set(merged.orientation))
    result = verify(union, merged)
    if not (result.valid and result.nowhere_zero):
        raise PlanError("composed flow failed verification")  # pragma: no cover
    return merged
