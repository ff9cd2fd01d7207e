"""Moore machines over binary pin samples.

A machine reads one *sample* per time step.  At the public surface a sample is
a mapping ``pin -> level``; internally it is a tuple of levels aligned with
the machine's ``input_pins``, which are always sorted by name.  Output
vectors are tuples aligned with ``output_pins`` (declaration order).

States are opaque hashable tokens owned by each machine.  Nothing here looks
inside them.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import PinMismatch, StateBudgetExceeded
from .search import bounded_search

LEVELS = (0, 1)


def sorted_pins(pins: Iterable[str]) -> tuple[str, ...]:
    pins = tuple(pins)
    for p in pins:
        if not isinstance(p, str) or not p or any(c.isspace() for c in p):
            raise ValueError(f"bad pin name {p!r}")
    if len(set(pins)) != len(pins):
        raise ValueError(f"duplicate pin names in {pins}")
    return tuple(sorted(pins))


def all_samples(pins: Sequence[str]) -> list[tuple[int, ...]]:
    """Every sample over ``pins`` in canonical order (first pin most significant, 0 before 1)."""
    return list(itertools.product(LEVELS, repeat=len(pins)))


def sample_index(a: Sequence[int]) -> int:
    i = 0
    for bit in a:
        i = (i << 1) | bit
    return i


def as_sample(pins: Sequence[str], a) -> tuple[int, ...]:
    """Validate a pin mapping against ``pins`` and return it as a level tuple."""
    if isinstance(a, Mapping):
        if set(a) != set(pins):
            raise PinMismatch(f"sample pins {sorted(a)} != declared {sorted(pins)}")
        a = tuple(a[p] for p in pins)
    else:
        a = tuple(a)
        if len(a) != len(pins):
            raise PinMismatch(f"sample of width {len(a)} for {len(pins)} pins")
    for v in a:
        if v not in LEVELS:
            raise ValueError(f"level must be 0 or 1, got {v!r}")
    return a


def as_trace(pins: Sequence[str], w) -> list[tuple[int, ...]]:
    return [as_sample(pins, a) for a in w]


def to_dicts(pins: Sequence[str], w) -> list[dict[str, int]]:
    return [dict(zip(pins, a)) for a in w]


@dataclass
class Verdict:
    """Outcome of a bounded check.

    ``choices`` is only set for nondeterministic machines: the start branch
    followed by one branch index per sample.  ``bounded`` is False when the
    answer is known to hold for traces of every length.
    """

    status: str
    counterexample: list[dict[str, int]] | None = None
    choices: list[int] | None = None
    traces_explored: int = 0
    bounded: bool = True
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def __str__(self):
        s = f"{self.status} (traces explored: {self.traces_explored})"
        if self.counterexample is not None:
            s += f" counterexample of length {len(self.counterexample)}"
        return s


class Machine:
    """Common surface of deterministic and nondeterministic machines.

    ``branches(state, a)`` lists ``(choice, next_state)`` pairs; ``choice`` is
    an index in ``range(n_choices)``.  A deterministic machine has exactly one
    branch, choice 0.
    """

    input_pins: tuple[str, ...]
    output_pins: tuple[str, ...]
    n_choices = 1

    def initial_branches(self) -> list[tuple[int, Hashable]]:
        raise NotImplementedError

    def branches(self, state, a) -> list[tuple[int, Hashable]]:
        raise NotImplementedError

    def out(self, state) -> tuple[int, ...]:
        raise NotImplementedError

    def outputs(self, state) -> dict[str, int]:
        return dict(zip(self.output_pins, self.out(state)))

    @property
    def deterministic(self) -> bool:
        return self.n_choices == 1


class Transducer(Machine):
    initial_state: Hashable

    def step(self, state, a):
        raise NotImplementedError

    def initial_branches(self):
        return [(0, self.initial_state)]

    def branches(self, state, a):
        return [(0, self.step(state, a))]


class FunctionMachine(Transducer):
    """A transducer assembled from plain callables."""

    def __init__(self, input_pins, output_pins, initial_state, step, out):
        self.input_pins = sorted_pins(input_pins)
        self.output_pins = tuple(output_pins)
        self.initial_state = initial_state
        self._step = step
        self._out = out

    def step(self, state, a):
        return self._step(state, a)

    def out(self, state):
        return tuple(self._out(state))


class TableMachine(Transducer):
    """Explicit machine: states are ``0..n-1`` and samples index table columns."""

    def __init__(self, input_pins, output_pins, table, outs, initial_state=0):
        self.input_pins = sorted_pins(input_pins)
        self.output_pins = tuple(output_pins)
        self.table = [list(row) for row in table]
        self.outs = [tuple(o) for o in outs]
        self.initial_state = initial_state
        width = 1 << len(self.input_pins)
        if any(len(row) != width for row in self.table):
            raise ValueError("table rows must have one column per sample")

    def step(self, state, a):
        return self.table[state][sample_index(a)]

    def out(self, state):
        return self.outs[state]

    @property
    def n_states(self) -> int:
        return len(self.table)


def _check_det(m: Machine):
    if not m.deterministic:
        raise TypeError("operation needs a deterministic transducer")


def evaluate(m: Transducer, w) -> dict[str, int]:
    """Output after following ``w`` from the initial state; ``w=[]`` gives the initial output."""
    _check_det(m)
    s = m.initial_state
    for a in as_trace(m.input_pins, w):
        s = m.step(s, a)
    return m.outputs(s)


def run(m: Transducer, w) -> list[dict[str, int]]:
    """Outputs for every prefix of ``w``, Λ first (length ``len(w) + 1``)."""
    _check_det(m)
    s = m.initial_state
    res = [m.outputs(s)]
    for a in as_trace(m.input_pins, w):
        s = m.step(s, a)
        res.append(m.outputs(s))
    return res


def reachable_states(m: Machine, max_states: int = 100_000) -> list:
    """Breadth-first closure of the start state(s), in discovery order."""
    if max_states <= 0:
        raise ValueError("max_states must be positive")
    samples = all_samples(m.input_pins)
    seen = {}
    queue = deque()
    for _, s in m.initial_branches():
        if s not in seen:
            seen[s] = None
            queue.append(s)
    while queue:
        s = queue.popleft()
        for a in samples:
            for _, nxt in m.branches(s, a):
                if nxt not in seen:
                    seen[nxt] = None
                    if len(seen) > max_states:
                        raise StateBudgetExceeded(f"more than {max_states} reachable states")
                    queue.append(nxt)
    return list(seen)


def to_table(m: Transducer, max_states: int = 100_000):
    """Return ``(states, table, outs)`` with ``table[i][sample_index]`` a state index."""
    _check_det(m)
    states = reachable_states(m, max_states)
    index = {s: i for i, s in enumerate(states)}
    samples = all_samples(m.input_pins)
    table = [[index[m.step(s, a)] for a in samples] for s in states]
    outs = [m.out(s) for s in states]
    return states, table, outs


def refine(table: Sequence[Sequence[int]], outs: Sequence[Hashable]) -> list[int]:
    """Moore partition refinement; returns a block id per state.

    Blocks are numbered by first appearance so state 0 lands in block 0.
    """
    def renumber(keys):
        ids = {}
        return [ids.setdefault(k, len(ids)) for k in keys]

    block = renumber(outs)
    n_blocks = max(block) + 1 if block else 0
    while True:
        new = renumber((block[s], tuple(block[t] for t in row)) for s, row in enumerate(table))
        new_n = max(new) + 1 if new else 0
        if new_n == n_blocks:
            return new
        block, n_blocks = new, new_n


def minimize(m: Transducer, max_states: int = 100_000) -> TableMachine:
    """Quotient the reachable part of ``m`` by output equivalence.

    The result has ``origin`` (one representative original state per block)
    and ``block_of`` (original state -> block) attached for inspection.
    """
    states, table, outs = to_table(m, max_states)
    block = refine(table, outs)
    n = max(block) + 1
    rep = [None] * n
    for s, b in enumerate(block):
        if rep[b] is None:
            rep[b] = s
    mt = TableMachine(
        m.input_pins,
        m.output_pins,
        [[block[t] for t in table[rep[b]]] for b in range(n)],
        [outs[rep[b]] for b in range(n)],
    )
    mt.origin = [states[rep[b]] for b in range(n)]
    mt.block_of = {s: block[i] for i, s in enumerate(states)}
    return mt


def _aligned_out(m1: Machine, m2: Machine):
    if set(m1.input_pins) != set(m2.input_pins):
        raise PinMismatch(f"input pins differ: {m1.input_pins} vs {m2.input_pins}")
    if set(m1.output_pins) != set(m2.output_pins):
        raise PinMismatch(f"output pins differ: {m1.output_pins} vs {m2.output_pins}")
    order = [m2.output_pins.index(p) for p in m1.output_pins]
    return lambda s: tuple(m2.out(s)[i] for i in order)


def equivalent(m1: Transducer, m2: Transducer, depth: int, max_states: int = 100_000) -> Verdict:
    """Bounded equivalence; ``bounded=False`` in the verdict when it is also exact.

    The exact answer comes from refining the disjoint union of both machines,
    attempted only when both are finite within ``max_states``.
    """
    _check_det(m1)
    _check_det(m2)
    out2 = _aligned_out(m1, m2)
    samples = all_samples(m1.input_pins)

    def successors(pair):
        s1, s2 = pair
        return [(i, (m1.step(s1, a), m2.step(s2, a))) for i, a in enumerate(samples)]

    res = bounded_search(
        [(0, (m1.initial_state, m2.initial_state))],
        successors,
        lambda pair: m1.out(pair[0]) != out2(pair[1]),
        len(samples),
        depth,
    )
    if res.status == "FAIL":
        w = [samples[i] for i in res.path[1:]]
        return Verdict("FAIL", to_dicts(m1.input_pins, w), traces_explored=res.explored)
    verdict = Verdict(res.status, traces_explored=res.explored)
    try:
        st1, t1, o1 = to_table(m1, max_states)
        st2, t2, _ = to_table(m2, max_states)
    except StateBudgetExceeded:
        return verdict
    n1 = len(st1)
    union = t1 + [[n1 + j for j in row] for row in t2]
    block = refine(union, o1 + [out2(s) for s in st2])
    verdict.details["exact"] = block[0] == block[n1]
    if verdict.details["exact"]:
        verdict.bounded = False
    return verdict


def distinguishing_trace(m: TableMachine, s1: int, s2: int):
    """Shortest trace telling states ``s1`` and ``s2`` apart, or ``None``."""
    samples = all_samples(m.input_pins)
    seen = {(s1, s2): None}
    queue = deque([(s1, s2)])
    while queue:
        pair = queue.popleft()
        if m.out(pair[0]) != m.out(pair[1]):
            w = []
            while seen[pair] is not None:
                pair, a = seen[pair]
                w.append(a)
            return to_dicts(m.input_pins, w[::-1])
        for a in samples:
            nxt = (m.step(pair[0], a), m.step(pair[1], a))
            if nxt not in seen:
                seen[nxt] = (pair, a)
                queue.append(nxt)
    return None


def replay(m: Machine, w, choices=None) -> list:
    """States visited along ``w``; ``choices`` picks branches of a nondeterministic machine."""
    w = as_trace(m.input_pins, w)
    if choices is None:
        choices = [0] * (len(w) + 1)
    if len(choices) != len(w) + 1:
        raise ValueError("need one choice for the start and one per sample")

    def pick(branches, c):
        for choice, s in branches:
            if choice == c:
                return s
        raise ValueError(f"choice {c} not available")

    s = pick(m.initial_branches(), choices[0])
    states = [s]
    for a, c in zip(w, choices[1:]):
        s = pick(m.branches(s, a), c)
        states.append(s)
    return states
