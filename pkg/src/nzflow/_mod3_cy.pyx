# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the mod-3 orientation search.

Same algorithm and branching order as ``_mod3_py.search``; the two must stay
byte-for-byte interchangeable (the test suite asserts agreement).
"""

from libc.stdlib cimport free, malloc

KERNEL = "compiled"


def search(int n, list eu_list, list ev_list, list same_list):
    cdef int m = len(eu_list)
    if m == 0:
        return []
    # one block: eu | ev | dirs | delta | rem, then the same-flags
    cdef int *buf = <int *> malloc((3 * m + 2 * n) * sizeof(int))
    cdef char *same = <char *> malloc(m * sizeof(char))
    if buf == NULL or same == NULL:
        if buf != NULL:
            free(buf)
        if same != NULL:
            free(same)
        raise MemoryError()
    cdef int *eu = buf
    cdef int *ev = buf + m
    cdef int *dirs = buf + 2 * m
    cdef int *delta = buf + 3 * m
    cdef int *rem = buf + 3 * m + n
    cdef int i, u, v, d, lo, hi, nd, placed, ru, rv, du, dv
    cdef bint ok
    try:
        for i in range(n):
            delta[i] = 0
            rem[i] = 0
        for i in range(m):
            eu[i] = eu_list[i]
            ev[i] = ev_list[i]
            same[i] = 1 if same_list[i] else 0
            dirs[i] = -1
            rem[eu[i]] += 1
            rem[ev[i]] += 1
        i = 0
        while 0 <= i < m:
            u = eu[i]
            v = ev[i]
            d = dirs[i]
            if d >= 0:
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
                if du < 0:
                    du += 3
                if (ru == 0 and du != 0) or (ru == 1 and du == 0):
                    ok = False
                else:
                    rv = rem[v]
                    dv = delta[v] % 3
                    if dv < 0:
                        dv += 3
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
        if i != m:
            return None
        return [dirs[i] for i in range(m)]
    finally:
        free(buf)
        free(same)
