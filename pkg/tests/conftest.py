import random

import pytest

from nzflow.graphs import Multigraph


def complete_graph(n: int) -> Multigraph:
    g = Multigraph(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j)
    return g


def cycle_graph(n: int) -> Multigraph:
    g = Multigraph(range(n))
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
    return g


def path_graph(n: int) -> Multigraph:
    g = Multigraph(range(n))
    for i in range(n - 1):
        g.add_edge(i, i + 1)
    return g


def petersen_graph() -> Multigraph:
    g = Multigraph(range(10))
    for i in range(5):
        g.add_edge(i, (i + 1) % 5)
        g.add_edge(i, i + 5)
        g.add_edge(5 + i, 5 + (i + 2) % 5)
    return g


def random_regular_graph(n: int, d: int, rng: random.Random,
                         max_tries: int = 2000) -> Multigraph:
    """Simple d-regular graph via the pairing model with rejection."""
    assert n * d % 2 == 0
    for _ in range(max_tries):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]
        seen = set()
        ok = True
        for u, v in pairs:
            key = (min(u, v), max(u, v))
            if u == v or key in seen:
                ok = False
                break
            seen.add(key)
        if ok:
            g = Multigraph(range(n))
            for u, v in pairs:
                g.add_edge(u, v)
            return g
    raise RuntimeError("could not sample a simple regular graph")


def random_pseudoforest(rng: random.Random) -> Multigraph:
    """Disjoint union of 1-4 random components, each a tree or unicyclic."""
    g = Multigraph()
    base = 0
    for _ in range(rng.randint(1, 4)):
        n = rng.randint(1, 9)
        verts = list(range(base, base + n))
        for v in verts:
            g.add_vertex(v)
        for i in range(1, n):
            g.add_edge(verts[i], verts[rng.randrange(i) + base])
        if n >= 3 and rng.random() < 0.5:
            # close one extra edge between non-adjacent vertices, if any
            options = [(u, w) for u in verts for w in verts
                       if u < w and not g.edges_between(u, w)]
            if options:
                u, w = options[rng.randrange(len(options))]
                g.add_edge(u, w)
        base += n
    return g


@pytest.fixture
def rng():
    return random.Random(20260809)
