# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled bounded trace enumerator.

Walks the trace tree of a tabulated system by iterative deepening so that
memory stays O(depth) and the first bad node found is the shortest, then
lexicographically smallest, violating trace.
"""
import numpy as np


def explore(const int[:, ::1] table, const unsigned char[::1] bad,
            const int[::1] starts, int depth, long long max_nodes=0):
    cdef Py_ssize_t n_letters = table.shape[1]
    cdef Py_ssize_t n_starts = starts.shape[0]
    cdef int level, d, nxt
    cdef long long explored = 0
    cdef long long at_level
    cdef int[::1] state = np.empty(depth + 1, dtype=np.intc)
    cdef int[::1] cursor = np.empty(depth + 1, dtype=np.intc)

    for level in range(depth + 1):
        at_level = 0
        d = 0
        cursor[0] = -1
        while d >= 0:
            cursor[d] += 1
            if d == 0:
                if cursor[0] >= n_starts:
                    break
                state[0] = starts[cursor[0]]
            else:
                if cursor[d] >= n_letters:
                    d -= 1
                    continue
                nxt = table[state[d - 1], cursor[d]]
                if nxt < 0:
                    continue
                state[d] = nxt
            if d == level:
                explored += 1
                at_level += 1
                if bad[state[d]]:
                    return "FAIL", [int(cursor[i]) for i in range(level + 1)], explored
                if max_nodes > 0 and explored >= max_nodes:
                    return "BUDGET", None, explored
            else:
                d += 1
                cursor[d] = -1
        if at_level == 0:
            break
    return "PASS", None, explored
