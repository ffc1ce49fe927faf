"""Pure-Python kernel for the mod-3 orientation search.

An orientation with in-degree = out-degree (mod 3) at every vertex is
equivalent to an all-ones Z3-flow, hence to a nowhere-zero Z3-flow.  The
search branches on edge directions with two sound symmetry breaks (global
reversal via the first edge, sorted directions within parallel classes) and
prunes through per-vertex residue feasibility:

* a vertex with no remaining undecided edges needs imbalance = 0 (mod 3);
* with one remaining edge it needs imbalance != 0 (mod 3);
* with two or more remaining edges every residue is still reachable.
"""

from __future__ import annotations

KERNEL = "python"


def search(n: int, eu: list[int], ev: list[int], same: list[bool]) -> list[int] | None:
    """Direction bits (0: eu->ev, 1: ev->eu) for a mod-3 orientation, or None.

    Edges must be ordered so parallel copies are adjacent; ``same[i]`` marks
    edge i as parallel to edge i-1 (then bit i >= bit i-1 is enforced).
    """
    m = len(eu)
    if m == 0:
        return []
    delta = [0] * n
    rem = [0] * n
    for i in range(m):
        rem[eu[i]] += 1
        rem[ev[i]] += 1
    dirs = [-1] * m
    i = 0
    while 0 <= i < m:
        u = eu[i]
        v = ev[i]
        d = dirs[i]
        if d >= 0:
            # roll back the current assignment before trying the next one
            if d == 0:
                delta[u] -= 1
                delta[v] += 1
            else:
                delta[u] += 1
                delta[v] -= 1
            rem[u] += 1
            rem[v] += 1
        lo = d + 1
        if same[i] and dirs[i - 1] == 1 and lo < 1:
            lo = 1
        hi = 0 if i == 0 else 1
        placed = -1
        for nd in range(lo, hi + 1):
            if nd == 0:
                delta[u] += 1
                delta[v] -= 1
            else:
                delta[u] -= 1
                delta[v] += 1
            rem[u] -= 1
            rem[v] -= 1
            ru = rem[u]
            du = delta[u] % 3
            if (ru == 0 and du != 0) or (ru == 1 and du == 0):
                ok = False
            else:
                rv = rem[v]
                dv = delta[v] % 3
                ok = not ((rv == 0 and dv != 0) or (rv == 1 and dv == 0))
            if ok:
                placed = nd
                break
            if nd == 0:
                delta[u] -= 1
                delta[v] += 1
            else:
                delta[u] += 1
                delta[v] -= 1
            rem[u] += 1
            rem[v] += 1
        if placed >= 0:
            dirs[i] = placed
            i += 1
            if i < m:
                dirs[i] = -1
        else:
            dirs[i] = -1
            i -= 1
    return dirs if i == m else None
