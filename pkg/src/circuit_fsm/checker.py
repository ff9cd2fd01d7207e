"""Bounded universal checking of implication properties over traces.

A :class:`Property` pairs an antecedent with a consequent.  Both are
conditions evaluated incrementally: each keeps a small hashable state that is
advanced with the sample just applied and the machine's output afterwards.
The machine state and all condition states form one search state; the search
tabulates the bounded slice of that system and enumerates every trace (and
every branch of a nondeterministic machine) up to the requested depth.

Samples are enumerated with pins sorted by name and levels 0 before 1, and
branches in increasing choice order, so the reported counterexample is the
shortest violating trace and, among those, the first in that order.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .circuits import make_ripple_adder, make_sr_latch, ripple_pins, star_sides
from .core import Machine, Verdict, all_samples, replay, to_dicts
from .errors import UnknownPin
from .gates import AdderParams, GateParams, Policy, make_adder_bit, make_nand
from .observers import (
    HoldTracker,
    LatchedTracker,
    OutputStabilityTracker,
    hold,
    stable_output,
)
from .product import compose, induced_inputs
from .search import bounded_search


# -- conditions ------------------------------------------------------------

class Condition:
    def check_pins(self, inputs, outputs):
        pass

    def start(self, out):
        return None

    def step(self, st, a, out):
        return None

    def holds(self, st) -> bool:
        raise NotImplementedError


def _need(pin, pins, kind):
    if pin not in pins:
        raise UnknownPin(f"{kind} pin {pin!r} not in {tuple(pins)}")


@dataclass(frozen=True)
class Always(Condition):
    def holds(self, st):
        return True


@dataclass(frozen=True)
class HoldAtLeast(Condition):
    """Some (or, with ``every``, each) of ``pins`` held at ``level`` for ``bound`` steps."""

    pins: tuple
    level: int
    bound: int
    every: bool = False

    def check_pins(self, inputs, outputs):
        for p in self.pins:
            _need(p, inputs, "input")

    def start(self, out):
        return tuple((0, 0) for _ in self.pins)

    def step(self, st, a, out):
        return tuple(
            HoldTracker(p, cap=self.bound).step(s, a) for p, s in zip(self.pins, st)
        )

    def holds(self, st):
        hits = (HoldTracker.value(s, self.level) >= self.bound for s in st)
        return all(hits) if self.every else any(hits)


@dataclass(frozen=True)
class StableAtLeast(Condition):
    bound: int

    def start(self, out):
        return (None, 0)

    def step(self, st, a, out):
        prev, n = st
        cur = tuple(sorted(a.items()))
        return (cur, min(n + 1, self.bound) if cur == prev else 0)

    def holds(self, st):
        return st[1] >= self.bound


@dataclass(frozen=True)
class LatchedEquals(Condition):
    b: int
    t_latch: int

    def check_pins(self, inputs, outputs):
        _need("set", inputs, "input")
        _need("reset", inputs, "input")

    def start(self, out):
        return LatchedTracker(self.b, self.t_latch).start()

    def step(self, st, a, out):
        return LatchedTracker(self.b, self.t_latch).step(st, a)

    def holds(self, st):
        return LatchedTracker.value(st) == 1


def _project(out, pin):
    if pin is None:
        return tuple(out.values()) if len(out) > 1 else next(iter(out.values()))
    return out[pin]


@dataclass(frozen=True)
class OutputEquals(Condition):
    pin: str | None
    level: int

    def check_pins(self, inputs, outputs):
        if self.pin is None and len(outputs) != 1:
            raise UnknownPin("an output pin must be named for multi-output machines")
        if self.pin is not None:
            _need(self.pin, outputs, "output")

    def start(self, out):
        return _project(out, self.pin)

    def step(self, st, a, out):
        return _project(out, self.pin)

    def holds(self, st):
        return st == self.level


@dataclass(frozen=True)
class StableOutputAtLeast(Condition):
    bound: int
    pin: str | None = None

    def check_pins(self, inputs, outputs):
        if self.pin is not None:
            _need(self.pin, outputs, "output")

    def start(self, out):
        return OutputStabilityTracker(cap=self.bound).start(_project(out, self.pin))

    def step(self, st, a, out):
        return OutputStabilityTracker(cap=self.bound).step(st, _project(out, self.pin))

    def holds(self, st):
        return st[1] >= self.bound


@dataclass(frozen=True)
class StableOutputCoversHold(Condition):
    """Output stability is at least ``hold(w, p, level) - slack`` for every input pin."""

    pins: tuple
    level: int
    slack: int

    def start(self, out):
        return (tuple((0, 0) for _ in self.pins), (_project(out, None), 0))

    def step(self, st, a, out):
        holds, stab = st
        holds = tuple(HoldTracker(p).step(s, a) for p, s in zip(self.pins, holds))
        return (holds, OutputStabilityTracker().step(stab, _project(out, None)))

    def holds(self, st):
        holds, stab = st
        worst = max(HoldTracker.value(s, self.level) for s in holds)
        return stab[1] >= worst - self.slack


@dataclass(frozen=True)
class StarEquality(Condition):
    """The ripple adder identity on the last sample and current outputs."""

    n: int

    def start(self, out):
        return None

    def step(self, st, a, out):
        return star_sides(self.n, a, out)

    def holds(self, st):
        return st is None or st[0] == st[1]


@dataclass(frozen=True)
class AllOf(Condition):
    parts: tuple

    def check_pins(self, inputs, outputs):
        for c in self.parts:
            c.check_pins(inputs, outputs)

    def start(self, out):
        return tuple(c.start(out) for c in self.parts)

    def step(self, st, a, out):
        return tuple(c.step(s, a, out) for c, s in zip(self.parts, st))

    def holds(self, st):
        return all(c.holds(s) for c, s in zip(self.parts, st))


@dataclass(frozen=True)
class Property:
    name: str
    antecedent: Condition
    consequent: Condition

    def start(self, out):
        return (self.antecedent.start(out), self.consequent.start(out))

    def step(self, st, a, out):
        return (self.antecedent.step(st[0], a, out), self.consequent.step(st[1], a, out))

    def violated(self, st) -> bool:
        return self.antecedent.holds(st[0]) and not self.consequent.holds(st[1])


def nand_constraint_properties(pins: Sequence[str], t: int) -> list[Property]:
    pins = tuple(pins)
    return [
        Property("low_input_forces_high", HoldAtLeast(pins, 0, t), OutputEquals(None, 1)),
        Property("high_inputs_force_low", HoldAtLeast(pins, 1, t, every=True), OutputEquals(None, 0)),
    ]


# -- the universal checker ---------------------------------------------------

def check_universal(m: Machine, props, depth: int, max_nodes: int = 0,
                    max_states: int | None = None) -> Verdict:
    """Check ``antecedent => consequent`` at every prefix of every trace up to ``depth``.

    ``max_nodes`` caps enumerated traces and ``max_states`` caps distinct
    search states; either limit yields a BUDGET verdict.
    """
    if isinstance(props, Property):
        props = [props]
    props = list(props)
    for p in props:
        p.antecedent.check_pins(m.input_pins, m.output_pins)
        p.consequent.check_pins(m.input_pins, m.output_pins)
    samples = all_samples(m.input_pins)
    sample_dicts = to_dicts(m.input_pins, samples)
    nc = m.n_choices

    def successors(joint):
        s, mon = joint
        res = []
        for k, (a, ad) in enumerate(zip(samples, sample_dicts)):
            for c, ns in m.branches(s, a):
                out = m.outputs(ns)
                res.append((k * nc + c, (ns, tuple(p.step(st, ad, out) for p, st in zip(props, mon)))))
        return res

    starts = []
    for c, s in m.initial_branches():
        out = m.outputs(s)
        starts.append((c, (s, tuple(p.start(out) for p in props))))

    def is_bad(joint):
        return any(p.violated(st) for p, st in zip(props, joint[1]))

    res = bounded_search(starts, successors, is_bad, len(samples) * nc, depth,
                         max_states=max_states, max_nodes=max_nodes)
    details = {"depth": depth, "properties": [p.name for p in props], "search_states": res.n_states}
    if res.status != "FAIL":
        return Verdict(res.status, traces_explored=res.explored, details=details)

    w = [sample_dicts[letter // nc] for letter in res.path[1:]]
    choices = [res.path[0]] + [letter % nc for letter in res.path[1:]]
    failed = replay_violations(m, props, w, choices)
    if not failed:
        raise AssertionError("counterexample did not replay")
    details["violated"] = failed
    return Verdict("FAIL", w, None if m.deterministic else choices,
                   traces_explored=res.explored, details=details)


def replay_violations(m: Machine, props, w, choices=None) -> list[str]:
    """Names of the properties violated at the end of ``w`` (branch ``choices`` if nondeterministic)."""
    if isinstance(props, Property):
        props = [props]
    states = replay(m, w, choices)
    mon = [p.start(m.outputs(states[0])) for p in props]
    for a, s in zip(w, states[1:]):
        out = m.outputs(s)
        mon = [p.step(st, dict(a), out) for p, st in zip(props, mon)]
    return [p.name for p, st in zip(props, mon) if p.violated(st)]


# -- the specific claims -----------------------------------------------------

def check_stability_lemma(t: int, k: int, depth: int, policy=Policy.HOLD_LAST,
                          pins=("1", "2"), initial_output: int = 1, max_nodes: int = 0) -> Verdict:
    """Holding any input low for ``t + k`` steps keeps a NAND's output stable ``k`` steps."""
    if t < 1 or k < 0:
        raise ValueError("need t >= 1 and k >= 0")
    gate = make_nand(GateParams(pins, t, initial_output, policy))
    prop = Property(f"stability_lemma_t{t}_k{k}", Always(),
                    StableOutputCoversHold(gate.input_pins, 0, t + k))
    v = check_universal(gate, prop, depth, max_nodes=max_nodes)
    v.details.update(t=t, k=k, policy=Policy(policy).value)
    return v


def latch_properties(t_latch: int) -> list[Property]:
    return [
        Property(f"latched_{b}_implies_q_{b}", LatchedEquals(b, t_latch), OutputEquals("q", b))
        for b in (0, 1)
    ]


def check_latch_claim(t: int, slack: int, policy=Policy.HOLD_LAST, initials=(1, 0),
                      max_nodes: int = 0) -> Verdict:
    """Decide "q follows the latched bit after 3t+2 steps" for the NAND latch.

    Under the adversarial policy the gates' initial outputs are branched over
    and ``initials`` is ignored.  ``details['tightness']`` holds the verdict of
    the same check with a latch delay of ``3t+1``.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    policy = Policy(policy)
    depth = 3 * t + 2 + slack
    m = compose(make_sr_latch(t, initials, policy).spec)
    v = check_universal(m, latch_properties(3 * t + 2), depth, max_nodes=max_nodes)
    probe = check_universal(m, latch_properties(3 * t + 1), depth, max_nodes=max_nodes)
    v.details.update(t=t, t_latch=3 * t + 2, policy=policy.value, tightness=probe,
                     initials=None if policy is Policy.ADVERSARIAL else tuple(initials))
    return v


def latch_delay_bound(t: int, depth: int, policy=Policy.HOLD_LAST, initials=(1, 0)) -> int | None:
    """Smallest latch delay for which the latch claim passes at ``depth``."""
    m = compose(make_sr_latch(t, initials, policy).spec)
    for t_latch in range(1, depth + 1):
        if check_universal(m, latch_properties(t_latch), depth).passed:
            return t_latch
    return None


def check_adder_lemma(t: int, k: int, depth: int, initials=(0, 0), max_nodes: int = 0) -> Verdict:
    """Inputs stable for ``t + k`` steps keep both adder outputs stable ``k`` steps."""
    if t < 1 or k < 0:
        raise ValueError("need t >= 1 and k >= 0")
    d = make_adder_bit(AdderParams(t, *initials))
    prop = Property(
        f"adder_lemma_t{t}_k{k}",
        StableAtLeast(t + k),
        AllOf((StableOutputAtLeast(k, "sum"), StableOutputAtLeast(k, "carry_out"))),
    )
    v = check_universal(d, prop, depth, max_nodes=max_nodes)
    v.details.update(t=t, k=k)
    return v


def check_ripple_star(n: int, t: int, prefix_len: int = 0, trials: int = 0, seed: int = 0,
                      initials=None) -> Verdict:
    """Hold each input assignment ``n*t + n`` steps after random prefixes; the sum must be right.

    Exhaustive over assignments; ``trials`` seeded random prefixes of length
    at most ``prefix_len`` each (just the empty prefix when ``trials`` is 0).
    """
    if n < 1 or t < 1:
        raise ValueError("need n >= 1 and t >= 1")
    v = make_ripple_adder(n, t, initials)
    m = compose(v.spec)
    rng = random.Random(seed)
    samples = all_samples(m.input_pins)
    hold_steps = n * t + n
    explored = 0
    for a in samples:
        ad = dict(zip(m.input_pins, a))
        prefixes = [[]] if trials == 0 else [
            [rng.choice(samples) for _ in range(rng.randint(0, prefix_len))] for _ in range(trials)
        ]
        for prefix in prefixes:
            s = m.initial_state
            for b in prefix:
                s = m.step(s, b)
            for _ in range(hold_steps):
                s = m.step(s, a)
            explored += 1
            lhs, rhs = star_sides(n, ad, m.outputs(s))
            if lhs != rhs:
                w = to_dicts(m.input_pins, list(prefix) + [a] * hold_steps)
                return Verdict("FAIL", w, traces_explored=explored,
                               details={"n": n, "t": t, "seed": seed, "lhs": lhs, "rhs": rhs})
    return Verdict("PASS", traces_explored=explored,
                   details={"n": n, "t": t, "seed": seed, "assignments": len(samples)})


def interconnect_offset_probe(t: int = 1, depth: int = 3, random_trials: int = 200,
                              random_len: int = 20, seed: int = 0) -> Verdict:
    """Bit 2's carry-in hold equals bit 1's carry-out stability one step earlier, plus one.

    Checked on a 2-bit ripple adder over every trace up to ``depth`` and on
    seeded random traces.
    """
    v = make_ripple_adder(2, t)
    first = v.spec.factors[0]
    pins, _ = ripple_pins(2)
    pins = sorted(pins)
    samples = to_dicts(pins, all_samples(pins))
    rng = random.Random(seed)
    traces = itertools.chain(
        (list(w) for d in range(1, depth + 1) for w in itertools.product(samples, repeat=d)),
        ([rng.choice(samples) for _ in range(random_len)] for _ in range(random_trials)),
    )
    explored = 0
    for w in traces:
        explored += 1
        u1, u2 = induced_inputs(v.spec, w)
        carries = [o["carry_out"] for o in _outputs_along(first, u1)]
        for m in range(1, len(w) + 1):
            b = carries[m - 1]
            lhs = hold(u2[:m], "carry_in", b)
            rhs = stable_output(carries[:m]) + 1
            if lhs != rhs:
                return Verdict("FAIL", w[:m], traces_explored=explored,
                               details={"hold": lhs, "stability_plus_one": rhs})
    return Verdict("PASS", traces_explored=explored, details={"t": t, "depth": depth})


def _outputs_along(m, w):
    s = m.initial_state
    outs = [m.outputs(s)]
    for a in w:
        s = m.step(s, tuple(a[p] for p in m.input_pins))
        outs.append(m.outputs(s))
    return outs
