"""Transformation monoids of minimized machines.

Every trace ``w`` acts on the minimized state set by ``s -> δ*(s, w)``.  An
element is stored as its image vector over the state universe, so two traces
give the same element exactly when they act identically.  Composition
follows trace concatenation: ``compose(e_u, e_z)`` is the action of ``u``
followed by ``z``.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import Transducer, Verdict, all_samples, minimize
from .errors import ElementBudgetExceeded


@dataclass
class TransformationMonoid:
    state_universe: list  # original state tokens, one per minimized state
    elements: list[tuple[int, ...]]  # elements[0] is the identity
    generators: dict  # sample tuple -> element

    @property
    def identity(self) -> tuple[int, ...]:
        return self.elements[0]

    @staticmethod
    def compose(e1, e2):
        return tuple(e2[s] for s in e1)

    def __len__(self):
        return len(self.elements)

    def idempotents(self) -> int:
        return sum(1 for e in self.elements if self.compose(e, e) == e)

    def has_nontrivial_unit(self) -> bool:
        """Is some non-identity element a permutation of the states?"""
        n = len(self.identity)
        return any(len(set(e)) == n for e in self.elements[1:])

    def stats(self) -> dict:
        return {
            "size": len(self),
            "states": len(self.state_universe),
            "generators": len(set(self.generators.values())),
            "idempotents": self.idempotents(),
            "nontrivial_units": self.has_nontrivial_unit(),
        }


def monoid(m: Transducer, max_elements: int = 100_000, max_states: int = 100_000) -> TransformationMonoid:
    mm = minimize(m, max_states)
    n = mm.n_states
    samples = all_samples(mm.input_pins)
    gens = {a: tuple(mm.table[s][i] for s in range(n)) for i, a in enumerate(samples)}
    identity = tuple(range(n))
    seen = {identity: None}
    queue = deque([identity])
    distinct_gens = list(dict.fromkeys(gens.values()))
    while queue:
        e = queue.popleft()
        for g in distinct_gens:
            x = tuple(g[s] for s in e)
            if x not in seen:
                seen[x] = None
                if len(seen) > max_elements:
                    raise ElementBudgetExceeded(f"more than {max_elements} monoid elements")
                queue.append(x)
    return TransformationMonoid(list(mm.origin), list(seen), gens)


def act(mon: TransformationMonoid, w) -> tuple[int, ...]:
    """Element of ``w`` as the product of its per-sample generators."""
    e = mon.identity
    for a in w:
        e = mon.compose(e, mon.generators[tuple(a)])
    return e


def monoid_laws(mon: TransformationMonoid, trials: int = 1000, seed: int = 0) -> Verdict:
    """Identity, closure over all pairs, and associativity on random triples."""
    elems = np.asarray(mon.elements, dtype=np.int64)
    ident = elems[0]
    if not np.array_equal(ident, np.arange(len(ident))):
        return Verdict("FAIL", details={"law": "identity", "reason": "first element is not the identity"})
    # e then identity, identity then e
    if not (np.array_equal(ident[elems], elems) and np.array_equal(elems[:, ident], elems)):
        return Verdict("FAIL", details={"law": "identity"})
    members = {e.tobytes() for e in elems}
    checked = 0
    for i in range(len(elems)):
        # row j: elems[i] followed by elems[j]
        for row in elems[:, elems[i]]:
            checked += 1
            if row.tobytes() not in members:
                return Verdict("FAIL", traces_explored=checked,
                               details={"law": "closure", "left": i})
    rng = random.Random(seed)
    c = mon.compose
    for _ in range(trials):
        a, b, d = (mon.elements[rng.randrange(len(mon))] for _ in range(3))
        if c(c(a, b), d) != c(a, c(b, d)):
            return Verdict("FAIL", details={"law": "associativity", "triple": (a, b, d)})
    return Verdict("PASS", traces_explored=checked, details={"size": len(mon), "trials": trials})


def is_combinational(m: Transducer, max_states: int = 100_000) -> bool:
    """Does holding any input sample drive every state into a fixed point?

    On the minimized machine, the only cycles allowed under a single repeated
    sample are self-loops.  Circuits without feedback settle under constant
    input; a latch driven from ``set=reset=0`` into ``set=reset=1`` can
    oscillate.
    """
    mm = minimize(m, max_states)
    n = mm.n_states
    for col in range(1 << len(mm.input_pins)):
        nxt = [mm.table[s][col] for s in range(n)]
        for s in range(n):
            # follow the sample from s; a cycle longer than 1 shows up within n steps
            x = s
            for _ in range(n):
                x = nxt[x]
            if nxt[x] != x:
                return False
    return True


def transition_graph_acyclic(m: Transducer, max_states: int = 100_000) -> bool:
    """Is the minimized transition graph, self-loops removed, free of cycles?"""
    import graphlib

    mm = minimize(m, max_states)
    graph = {s: {t for t in row if t != s} for s, row in enumerate(mm.table)}
    try:
        tuple(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError:
        return False
    return True
