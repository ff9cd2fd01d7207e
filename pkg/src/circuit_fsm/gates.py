"""Gate and single-bit adder machines with propagation delay.

A gate only promises something once its inputs have been held long enough:
a NAND with delay ``t`` must output 1 once any pin has been low for ``t``
steps and 0 once every pin has been high for ``t`` steps.  Between those
events the output is free.  Two ways of resolving that freedom are offered:

``Policy.HOLD_LAST``
    the output keeps its previous value (a runnable transducer);
``Policy.ADVERSARIAL``
    every allowed output is a separate branch (a nondeterministic machine
    that stands for the whole family of conforming gates).

Gate state is ``(runs, out)`` where ``runs`` holds one ``(level, run)`` pair
per input pin.  Runs saturate at ``t`` because longer holds are
indistinguishable to the constraints.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import Machine, Transducer, Verdict, sorted_pins


class Policy(str, Enum):
    HOLD_LAST = "holdlast"
    ADVERSARIAL = "adversarial"


@dataclass(frozen=True)
class GateParams:
    pins: tuple[str, ...] = ("1", "2")
    delay_t: int = 1
    initial_output: int = 1
    transient_policy: Policy = Policy.HOLD_LAST

    def __post_init__(self):
        object.__setattr__(self, "pins", sorted_pins(self.pins))
        object.__setattr__(self, "transient_policy", Policy(self.transient_policy))
        if not self.pins:
            raise ValueError("a gate needs at least one input pin")
        if self.delay_t < 1:
            raise ValueError("propagation delay must be at least 1")
        if self.initial_output not in (0, 1):
            raise ValueError("initial output must be 0 or 1")


@dataclass(frozen=True)
class AdderParams:
    delay_t: int = 1
    initial_sum: int = 0
    initial_carry: int = 0

    def __post_init__(self):
        if self.delay_t < 1:
            raise ValueError("propagation delay must be at least 1")
        if self.initial_sum not in (0, 1) or self.initial_carry not in (0, 1):
            raise ValueError("initial outputs must be 0 or 1")


def advance_runs(runs, a, cap):
    new = []
    for (level, run), v in zip(runs, a):
        run = run + 1 if (v == level and run) else 1
        if cap is not None and run > cap:
            run = cap
        new.append((v, run))
    return tuple(new)


def _held(runs, level, t):
    return [lv == level and run >= t for lv, run in runs]


def nand_allowed(state, t: int) -> frozenset:
    """Outputs a conforming NAND may show in ``state`` (a ``(runs, out)`` pair or bare runs)."""
    runs = state[0] if len(state) == 2 and isinstance(state[1], int) else state
    if any(_held(runs, 0, t)):
        return frozenset({1})
    if all(_held(runs, 1, t)):
        return frozenset({0})
    return frozenset({0, 1})


class _HoldLastGate(Transducer):
    output_pins = ("out",)

    def __init__(self, params: GateParams, capped: bool = True):
        self.params = params
        self.t = params.delay_t
        self.input_pins = params.pins
        self._cap = self.t if capped else None
        self.initial_state = (tuple((0, 0) for _ in self.input_pins), params.initial_output)

    def step(self, state, a):
        runs = advance_runs(state[0], a, self._cap)
        return (runs, self._settle(runs, state[1]))

    def out(self, state):
        return (state[1],)

    def __repr__(self):
        return f"{type(self).__name__}(pins={self.input_pins}, t={self.t})"


class NandGate(_HoldLastGate):
    def _settle(self, runs, prev):
        if any(_held(runs, 0, self.t)):
            return 1
        if all(_held(runs, 1, self.t)):
            return 0
        return prev


class OrGate(_HoldLastGate):
    def _settle(self, runs, prev):
        if any(_held(runs, 1, self.t)):
            return 1
        if all(_held(runs, 0, self.t)):
            return 0
        return prev


class AdversarialNand(Machine):
    """All NAND gates with delay ``t`` at once: unconstrained outputs branch 0 then 1.

    The choice index of a branch is the output level it picks.  The output at
    Λ is unconstrained too, so there are two start states.
    """

    output_pins = ("out",)
    n_choices = 2

    def __init__(self, params: GateParams):
        self.params = params
        self.t = params.delay_t
        self.input_pins = params.pins
        self._runs0 = tuple((0, 0) for _ in self.input_pins)

    def initial_branches(self):
        return [(c, (self._runs0, c)) for c in sorted(nand_allowed(self._runs0, self.t))]

    def branches(self, state, a):
        runs = advance_runs(state[0], a, self.t)
        return [(c, (runs, c)) for c in sorted(nand_allowed(runs, self.t))]

    def out(self, state):
        return (state[1],)


class AdderBit(Transducer):
    """Single-bit full adder: inputs ``carry_in, v1, v2``; outputs ``sum, carry_out``."""

    input_pins = ("carry_in", "v1", "v2")
    output_pins = ("sum", "carry_out")

    def __init__(self, params: AdderParams, capped: bool = True):
        self.params = params
        self.t = params.delay_t
        self._cap = self.t if capped else None
        self.initial_state = (((0, 0),) * 3, (params.initial_sum, params.initial_carry))

    def step(self, state, a):
        runs = advance_runs(state[0], a, self._cap)
        if all(run >= self.t for _, run in runs):
            total = sum(level for level, _ in runs)
            return (runs, (total % 2, total // 2))
        return (runs, state[1])

    def out(self, state):
        return state[1]


def make_nand(p: GateParams, capped: bool = True) -> Machine:
    if p.transient_policy is Policy.ADVERSARIAL:
        return AdversarialNand(p)
    return NandGate(p, capped)


def make_or(p: GateParams, capped: bool = True) -> Transducer:
    if p.transient_policy is not Policy.HOLD_LAST:
        raise ValueError("OR gates are only available with the hold-last policy")
    return OrGate(p, capped)


def make_adder_bit(p: AdderParams, capped: bool = True) -> Transducer:
    return AdderBit(p, capped)


def check_gate_constraints(m: Machine, t: int, depth: int, max_nodes: int = 0) -> Verdict:
    """Bounded check of both NAND constraints on a single-output machine."""
    from .checker import nand_constraint_properties, check_universal

    return check_universal(m, nand_constraint_properties(m.input_pins, t), depth, max_nodes=max_nodes)
