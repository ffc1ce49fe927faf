"""Hopcroft-Karp maximum bipartite matching on adjacency dicts.

Deterministic for a fixed iteration order: left vertices are processed in
sorted order and adjacency lists are sorted.
"""

from __future__ import annotations

from collections import deque

_INF = float("inf")


def hopcroft_karp(adj: dict) -> dict:
    """Maximum matching of {left: [right, ...]} as a dict {left: right}."""
    left = sorted(adj)
    graph = {u: sorted(set(adj[u])) for u in left}
    match_l: dict = {}
    match_r: dict = {}
    dist: dict = {}

    def bfs() -> bool:
        queue = deque()
        for u in left:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        while queue:
            u = queue.popleft()
            for w in graph[u]:
                z = match_r.get(w)
                if z is None:
                    found = True
                elif dist[z] == _INF:
                    dist[z] = dist[u] + 1
                    queue.append(z)
        return found

    def dfs(u) -> bool:
        for w in graph[u]:
            z = match_r.get(w)
            if z is None or (dist.get(z) == dist[u] + 1 and dfs(z)):
                match_l[u] = w
                match_r[w] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in left:
            if u not in match_l:
                dfs(u)
    return match_l
