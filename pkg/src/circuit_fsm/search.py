"""Tabulate a bounded branching system and hand it to the trace kernel.

A system is given abstractly: a list of labelled start states, a successor
function yielding ``(letter, next_state)`` pairs and a badness predicate.
States only need to be hashable.  Breadth-first discovery stops expanding at
``depth`` so infinite systems are fine as long as the bounded slice is small.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass
class SearchResult:
    status: str
    path: list | None  # [start label, letter, letter, ...] on FAIL
    explored: int
    n_states: int


def tabulate(starts, successors, is_bad, n_letters, depth, max_states=None):
    """Return ``(table, bad, start_ids, start_labels)`` or ``None`` past budget."""
    index = {}
    order = []
    dist = []

    def intern(s, d):
        i = index.get(s)
        if i is None:
            i = index[s] = len(order)
            order.append(s)
            dist.append(d)
        return i

    start_ids = []
    start_labels = []
    for label, s in starts:
        start_ids.append(intern(s, 0))
        start_labels.append(label)
    rows = {}
    head = 0
    while head < len(order):
        if max_states is not None and len(order) > max_states:
            return None
        i = head
        head += 1
        if dist[i] >= depth:
            continue
        row = np.full(n_letters, -1, dtype=np.intc)
        for letter, nxt in successors(order[i]):
            row[letter] = intern(nxt, dist[i] + 1)
        rows[i] = row
    if max_states is not None and len(order) > max_states:
        return None
    table = np.full((max(len(order), 1), n_letters), -1, dtype=np.intc)
    for i, row in rows.items():
        table[i] = row
    bad = np.fromiter((bool(is_bad(s)) for s in order), dtype=np.uint8, count=len(order))
    return table, bad, np.asarray(start_ids, dtype=np.intc), start_labels


def bounded_search(starts, successors, is_bad, n_letters, depth,
                   max_states=None, max_nodes=0):
    tab = tabulate(starts, successors, is_bad, n_letters, depth, max_states)
    if tab is None:
        return SearchResult("BUDGET", None, 0, max_states)
    table, bad, start_ids, labels = tab
    status, path, explored = kernels.explore(table, bad, start_ids, depth, max_nodes)
    if path is not None:
        path = [labels[path[0]]] + list(path[1:])
    return SearchResult(status, path, int(explored), len(bad))
