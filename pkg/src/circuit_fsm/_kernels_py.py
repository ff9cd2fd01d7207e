"""Pure numpy fallback for the bounded trace enumerator.

Level-synchronous: level ``L`` holds every trace of length ``L`` as
(state, parent, letter) arrays in lexicographic order, so the first bad entry
of the first level containing one is the same trace the compiled
depth-first kernel reports.  The deepest level is streamed in chunks and
never stored.
"""
import numpy as np

CHUNK = 1 << 22


def explore(table, bad, starts, depth, max_nodes=0):
    table = np.ascontiguousarray(table, dtype=np.intc)
    bad = np.asarray(bad, dtype=bool)
    n_letters = table.shape[1]
    states = np.asarray(starts, dtype=np.intc)
    parents = []
    letters = [np.arange(len(states), dtype=np.intc)]
    explored = 0
    for level in range(depth + 1):
        if level > 0:
            keep = level < depth
            step = max(1, CHUNK // n_letters)
            new_states, new_parents, new_letters = [], [], []
            for lo in range(0, len(states), step):
                nxt = table[states[lo:lo + step]].ravel()
                idx = np.flatnonzero(nxt >= 0)
                sts = nxt[idx]
                res = _scan(bad, sts, explored, max_nodes)
                if res is not None:
                    kind, pos, count = res
                    if kind == "BUDGET":
                        return "BUDGET", None, count
                    parent = lo + int(idx[pos]) // n_letters
                    path = _backtrack(parents, letters, parent) + [int(idx[pos]) % n_letters]
                    return "FAIL", path, count
                explored += len(sts)
                if keep:
                    new_states.append(sts)
                    new_parents.append(lo + idx // n_letters)
                    new_letters.append((idx % n_letters).astype(np.intc))
            if not keep:
                break
            states = np.concatenate(new_states) if new_states else np.empty(0, np.intc)
            parents.append(np.concatenate(new_parents) if new_parents else np.empty(0, np.intp))
            letters.append(np.concatenate(new_letters) if new_letters else np.empty(0, np.intc))
        else:
            res = _scan(bad, states, explored, max_nodes)
            if res is not None:
                kind, pos, count = res
                if kind == "BUDGET":
                    return "BUDGET", None, count
                return "FAIL", [pos], count
            explored += len(states)
        if len(states) == 0:
            break
    return "PASS", None, explored


def _scan(bad, sts, explored, max_nodes):
    """First bad position or budget hit among ``sts``; ``None`` if neither."""
    hits = np.flatnonzero(bad[sts])
    first = int(hits[0]) if len(hits) else None
    if max_nodes > 0 and explored + len(sts) >= max_nodes:
        limit = max_nodes - explored
        if first is not None and first < limit:
            return "FAIL", first, explored + first + 1
        return "BUDGET", None, max_nodes
    if first is not None:
        return "FAIL", first, explored + first + 1
    return None


def _backtrack(parents, letters, pos):
    path = []
    for level in range(len(letters) - 1, -1, -1):
        path.append(int(letters[level][pos]))
        if level > 0:
            pos = int(parents[level - 1][pos])
    return path[::-1]
