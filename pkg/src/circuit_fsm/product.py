"""Feedback products of machines connected by wires only.

Each factor input pin is driven either by an external input pin or by an
output pin of some factor (possibly itself).  Factor-driven inputs read the
outputs of the *current* state, so every connection costs one step of delay:

    state' = (step_i(s_i, c_i) for each factor i)
    c_i(p) = a(q)              for External(q)
    c_i(p) = out_j(s_j)[q]     for Factor(j, q)

The composite output selects factor output pins of the new state.  Factor
indices are 0-based.
"""
from __future__ import annotations

import graphlib
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Union

from .core import (
    Machine,
    Transducer,
    Verdict,
    all_samples,
    as_trace,
    evaluate,
    sorted_pins,
    to_dicts,
)
from .errors import SpecInvalid
from .search import bounded_search


@dataclass(frozen=True)
class External:
    pin: str


@dataclass(frozen=True)
class Factor:
    index: int
    out_pin: str


WireSource = Union[External, Factor]


@dataclass
class ProductSpec:
    factors: list
    wiring: dict  # (factor index, factor input pin) -> WireSource
    exposure: dict  # composite output pin -> (factor index, factor output pin)
    input_pins: tuple = field(default=())

    def __post_init__(self):
        try:
            self.input_pins = sorted_pins(self.input_pins)
        except ValueError as e:
            raise SpecInvalid(str(e)) from None

    def validate(self):
        if not self.factors:
            raise SpecInvalid("a product needs at least one factor")
        for i, f in enumerate(self.factors):
            if not isinstance(f, Machine):
                raise SpecInvalid(f"factor {i} is not a machine")
        expected = {(i, p) for i, f in enumerate(self.factors) for p in f.input_pins}
        missing = expected - set(self.wiring)
        if missing:
            i, p = min(missing)
            raise SpecInvalid(f"factor {i} input pin {p!r} is not driven")
        extra = set(self.wiring) - expected
        if extra:
            i, p = min(extra, key=repr)
            raise SpecInvalid(f"wiring names unknown factor input ({i}, {p!r})")
        for key, src in self.wiring.items():
            if isinstance(src, External):
                if src.pin not in self.input_pins:
                    raise SpecInvalid(f"{key} driven by unknown input pin {src.pin!r}")
            elif isinstance(src, Factor):
                self._check_factor_pin(src.index, src.out_pin, f"{key} source")
            else:
                raise SpecInvalid(f"{key}: wire source must be External or Factor, got {src!r}")
        if not self.exposure:
            raise SpecInvalid("no output pins exposed")
        for pin, (j, q) in self.exposure.items():
            self._check_factor_pin(j, q, f"output {pin!r}")

    def _check_factor_pin(self, j, q, what):
        if not (isinstance(j, int) and 0 <= j < len(self.factors)):
            raise SpecInvalid(f"{what} refers to missing factor {j}")
        if q not in self.factors[j].output_pins:
            raise SpecInvalid(f"{what} refers to unknown output {q!r} of factor {j}")


class Product(Machine):
    """Composite of ``spec``; nondeterministic when any factor is."""

    def __init__(self, spec: ProductSpec):
        spec.validate()
        self.spec = spec
        self.factors = list(spec.factors)
        self.input_pins = spec.input_pins
        self.output_pins = tuple(spec.exposure)
        pin_pos = {p: k for k, p in enumerate(self.input_pins)}
        self._sources = []
        for i, f in enumerate(self.factors):
            srcs = []
            for p in f.input_pins:
                src = spec.wiring[(i, p)]
                if isinstance(src, External):
                    srcs.append((-1, pin_pos[src.pin]))
                else:
                    srcs.append((src.index, self.factors[src.index].output_pins.index(src.out_pin)))
            self._sources.append(tuple(srcs))
        self._expose = tuple(
            (j, self.factors[j].output_pins.index(q)) for j, q in spec.exposure.values()
        )
        self._radices = [f.n_choices for f in self.factors]
        self.n_choices = math.prod(self._radices)

    def _inputs(self, outs, a):
        return [
            tuple(a[k] if j < 0 else outs[j][k] for j, k in srcs) for srcs in self._sources
        ]

    def _encode(self, choices):
        idx = 0
        for c, r in zip(choices, self._radices):
            idx = idx * r + c
        return idx

    def decode_choice(self, idx: int) -> tuple[int, ...]:
        out = []
        for r in reversed(self._radices):
            idx, c = divmod(idx, r)
            out.append(c)
        return tuple(reversed(out))

    def _combine(self, per_factor):
        return [
            (self._encode([c for c, _ in combo]), tuple(s for _, s in combo))
            for combo in itertools.product(*per_factor)
        ]

    def initial_branches(self):
        return self._combine([f.initial_branches() for f in self.factors])

    def branches(self, state, a):
        outs = [f.out(s) for f, s in zip(self.factors, state)]
        cs = self._inputs(outs, a)
        return self._combine([f.branches(s, c) for f, s, c in zip(self.factors, state, cs)])

    def out(self, state):
        return tuple(self.factors[j].out(state[j])[k] for j, k in self._expose)


class DetProduct(Product, Transducer):
    @property
    def initial_state(self):
        return tuple(f.initial_state for f in self.factors)

    def step(self, state, a):
        outs = [f.out(s) for f, s in zip(self.factors, state)]
        cs = self._inputs(outs, a)
        return tuple(f.step(s, c) for f, s, c in zip(self.factors, state, cs))


def compose(spec: ProductSpec) -> Product:
    spec.validate()
    if all(f.deterministic for f in spec.factors):
        return DetProduct(spec)
    return Product(spec)


def _induced_sample(spec, a, factor_outs, i):
    f = spec.factors[i]
    c = {}
    for p in f.input_pins:
        src = spec.wiring[(i, p)]
        c[p] = a[src.pin] if isinstance(src, External) else factor_outs[src.index][src.out_pin]
    return c


def induced_inputs(spec: ProductSpec, w) -> list[list[dict]]:
    """The per-factor input traces induced by ``w`` (Λ induces Λ everywhere).

    Factor outputs are taken from each factor's own representing function on
    its induced prefix, never from a composite machine.
    """
    spec.validate()
    w = to_dicts(spec.input_pins, as_trace(spec.input_pins, w))
    factors = spec.factors
    us = [[] for _ in factors]
    states = [f.initial_state for f in factors]
    for a in w:
        outs = [f.outputs(s) for f, s in zip(factors, states)]
        cs = [_induced_sample(spec, a, outs, i) for i in range(len(factors))]
        for i, f in enumerate(factors):
            us[i].append(cs[i])
            states[i] = f.step(states[i], tuple(cs[i][p] for p in f.input_pins))
    return us


def _expose(spec, factor_outs):
    return {pin: factor_outs[j][q] for pin, (j, q) in spec.exposure.items()}


def theorem1_check(spec: ProductSpec, depth: int, random_trials: int = 0,
                   random_len: int = 50, seed: int = 0, max_nodes: int = 0) -> Verdict:
    """Does the composite agree with the exposure of factor outputs on induced inputs?

    Exhaustive over traces up to ``depth`` (every prefix checked), then
    ``random_trials`` seeded random traces of length ``random_len``.
    """
    spec.validate()
    if not all(f.deterministic for f in spec.factors):
        raise SpecInvalid("factor agreement is checked on deterministic factors only")
    m = compose(spec)
    factors = spec.factors
    samples = all_samples(spec.input_pins)
    sample_dicts = to_dicts(spec.input_pins, samples)

    def route_out(fstates):
        return _expose(spec, [f.outputs(s) for f, s in zip(factors, fstates)])

    def successors(joint):
        ms, fstates = joint
        outs = [f.outputs(s) for f, s in zip(factors, fstates)]
        res = []
        for k, (a, ad) in enumerate(zip(samples, sample_dicts)):
            nxt = []
            for i, (f, s) in enumerate(zip(factors, fstates)):
                c = _induced_sample(spec, ad, outs, i)
                nxt.append(f.step(s, tuple(c[p] for p in f.input_pins)))
            res.append((k, (m.step(ms, a), tuple(nxt))))
        return res

    start = (m.initial_state, tuple(f.initial_state for f in factors))
    res = bounded_search(
        [(0, start)], successors, lambda j: m.outputs(j[0]) != route_out(j[1]),
        len(samples), depth, max_nodes=max_nodes,
    )
    details = {"exhaustive_depth": depth, "random_trials": random_trials,
               "random_len": random_len, "seed": seed}
    if res.status != "PASS":
        w = None if res.path is None else [sample_dicts[k] for k in res.path[1:]]
        return Verdict(res.status, w, traces_explored=res.explored, details=details)

    rng = random.Random(seed)
    explored = res.explored
    for _ in range(random_trials):
        w = [rng.choice(sample_dicts) for _ in range(random_len)]
        us = induced_inputs(spec, w)
        composite = [m.outputs(s) for s in _states_along(m, w)]
        fstates = [f.initial_state for f in factors]
        for n in range(len(w) + 1):
            if n:
                fstates = [f.step(s, tuple(us[i][n - 1][p] for p in f.input_pins))
                           for i, (f, s) in enumerate(zip(factors, fstates))]
            explored += 1
            if composite[n] != route_out(fstates):
                return Verdict("FAIL", w[:n], traces_explored=explored, details=details)
        final = _expose(spec, [evaluate(f, u) for f, u in zip(factors, us)])
        if final != composite[-1]:
            return Verdict("FAIL", w, traces_explored=explored, details=details)
    return Verdict("PASS", traces_explored=explored, details=details)


def _states_along(m, w):
    s = m.initial_state
    yield s
    for a in as_trace(m.input_pins, w):
        s = m.step(s, a)
        yield s


def dependency_edges(spec: ProductSpec) -> set[tuple[int, int]]:
    return {
        (src.index, i)
        for (i, _), src in spec.wiring.items()
        if isinstance(src, Factor)
    }


def is_feedback_free(spec: ProductSpec, recursive: bool = True) -> bool:
    """True when no factor's output can reach back into its own inputs.

    With ``recursive`` set, factors that are themselves products must be
    feedback-free as well.
    """
    spec.validate()
    graph = {i: set() for i in range(len(spec.factors))}
    for j, i in dependency_edges(spec):
        if i == j:
            return False
        graph[i].add(j)
    try:
        tuple(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError:
        return False
    if recursive:
        return all(is_feedback_free(f.spec) for f in spec.factors if isinstance(f, Product))
    return True
