"""Kernel selection and the graph-level mod-3 orientation driver.

The compiled extension is preferred when available; set NZFLOW_PURE_PYTHON=1
to force the pure-Python kernel (both implement the identical search).
"""

from __future__ import annotations

import os

from .graphs import Multigraph

from . import _mod3_py

if os.environ.get("NZFLOW_PURE_PYTHON"):
    _kernel = _mod3_py
else:
    try:
        from . import _mod3_cy as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _mod3_py

KERNEL = _kernel.KERNEL


def kernel_name() -> str:
    return KERNEL


def mod3_orientation(graph: Multigraph, kernel=None) -> dict[int, tuple] | None:
    """An orientation with d+(v) = d-(v) (mod 3) everywhere, or None.

    Returned as {edge id: (tail, head)}.  Components are solved separately;
    within one component edges are ordered breadth-first so conservation at a
    vertex closes as early as possible.
    """
    kern = kernel or _kernel
    orientation: dict[int, tuple] = {}
    for comp in graph.components():
        index = {v: i for i, v in enumerate(comp)}
        # breadth-first vertex order from the component's least vertex
        order = {}
        queue = [comp[0]]
        order[comp[0]] = 0
        while queue:
            w = queue.pop(0)
            for eid in graph.incident(w):
                z = graph.edge(eid).other(w)
                if z not in order:
                    order[z] = len(order)
                    queue.append(z)
        eids = sorted(
            (eid for eid in graph.edges
             if graph.edge(eid).u in index and graph.edge(eid).v in index),
            key=lambda eid: (
                max(order[graph.edge(eid).u], order[graph.edge(eid).v]),
                min(order[graph.edge(eid).u], order[graph.edge(eid).v]),
                eid,
            ),
        )
        eu, ev, same = [], [], []
        prev_pair = None
        for eid in eids:
            e = graph.edge(eid)
            u, v = e.u, e.v
            if order[u] > order[v]:
                u, v = v, u
            eu.append(order[u])
            ev.append(order[v])
            same.append((order[u], order[v]) == prev_pair)
            prev_pair = (order[u], order[v])
        bits = kern.search(len(comp), eu, ev, same)
        if bits is None:
            return None
        rank = {order[v]: v for v in comp}
        for eid, b, iu, iv in zip(eids, bits, eu, ev):
            tail, head = (rank[iu], rank[iv]) if b == 0 else (rank[iv], rank[iu])
            orientation[eid] = (tail, head)
    return orientation
