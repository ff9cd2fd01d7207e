"""Counters and predicates over traces and output sequences.

Every observer comes in two forms.  The plain functions take a whole trace
(a sequence of ``pin -> level`` mappings) and follow the recursive definition
literally.  The ``*Tracker`` classes carry one hashable value per step so a
checker can fold them into its search state; ``tests/test_observers.py``
holds the two forms against each other.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import Transducer, sorted_pins
from .errors import EmptyTrace, UnknownPin


@dataclass(frozen=True)
class HoldQuery:
    pin: str
    level: int


def _pin_check(w, pin):
    if w and pin not in w[0]:
        raise UnknownPin(pin)


def time(w) -> int:
    n = 0
    for _ in w:
        n += 1
    return n


def high(w, p: str) -> int:
    _pin_check(w, p)
    n = 0
    for a in w:
        n = (n + 1) * a[p]
    return n


def hold(w, pin: str, level: int) -> int:
    """How many trailing samples of ``w`` have ``pin`` at ``level``."""
    _pin_check(w, pin)
    n = 0
    for a in w:
        n = n + 1 if a[pin] == level else 0
    return n


def stable_output(outputs: Sequence, pin: str | None = None) -> int:
    """Trailing run of unchanged outputs; ``outputs[0]`` is the output at Λ.

    With ``pin`` given, dict-valued outputs are projected onto that pin first.
    """
    if not outputs:
        raise ValueError("need at least the initial output")
    if pin is not None:
        outputs = [o[pin] for o in outputs]
    n = 0
    for prev, cur in zip(outputs, outputs[1:]):
        n = n + 1 if cur == prev else 0
    return n


def last(w):
    if not w:
        raise EmptyTrace("last() of the empty trace")
    return w[-1]


def stable(w) -> int:
    n = 0
    for prev, cur in zip(w, w[1:]):
        n = n + 1 if dict(cur) == dict(prev) else 0
    return n


def latched(w, b: int, t_latch: int) -> int:
    if t_latch < 1:
        raise ValueError("t_latch must be at least 1")
    _pin_check(w, "set")
    _pin_check(w, "reset")
    value = 0
    for i in range(1, len(w) + 1):
        prefix = w[:i]
        a = prefix[-1]
        if b == 1 and hold(prefix, "reset", 0) >= t_latch and hold(prefix, "set", 1) >= t_latch:
            value = 1
        elif b == 0 and hold(prefix, "reset", 1) >= t_latch and hold(prefix, "set", 0) >= t_latch:
            value = 1
        elif a["set"] == a["reset"] == 1 and value > 0:
            value = 1
        else:
            value = 0
    return value


def unsigned(bits: Sequence[int]) -> int:
    """Index 0 of ``bits`` is the least significant bit."""
    return sum(b << i for i, b in enumerate(bits))


class HoldTracker:
    """Incremental hold counter.  State is ``(level, run)``; run saturates at ``cap``."""

    def __init__(self, pin: str, cap: int | None = None):
        self.pin = pin
        self.cap = cap

    def start(self):
        return (0, 0)

    def step(self, state, a: Mapping[str, int]):
        level, run = state
        v = a[self.pin]
        run = run + 1 if (v == level and run) else 1
        if self.cap is not None:
            run = min(run, self.cap)
        return (v, run)

    @staticmethod
    def value(state, level: int) -> int:
        return state[1] if state[0] == level else 0


class StableTracker:
    """Incremental ``stable``; state is ``(last sample tuple or None, count)``."""

    def __init__(self, pins: Sequence[str], cap: int | None = None):
        self.pins = tuple(pins)
        self.cap = cap

    def start(self):
        return (None, 0)

    def step(self, state, a: Mapping[str, int]):
        prev, n = state
        cur = tuple(a[p] for p in self.pins)
        n = n + 1 if cur == prev else 0
        if self.cap is not None:
            n = min(n, self.cap)
        return (cur, n)

    @staticmethod
    def value(state) -> int:
        return state[1]


class OutputStabilityTracker:
    """Incremental ``stable_output`` fed one output value per step."""

    def __init__(self, cap: int | None = None):
        self.cap = cap

    def start(self, x0):
        return (x0, 0)

    def step(self, state, x):
        prev, n = state
        n = n + 1 if x == prev else 0
        if self.cap is not None:
            n = min(n, self.cap)
        return (x, n)

    @staticmethod
    def value(state) -> int:
        return state[1]


class LatchedTracker:
    def __init__(self, b: int, t_latch: int):
        if t_latch < 1:
            raise ValueError("t_latch must be at least 1")
        self.b = b
        self.t_latch = t_latch
        self._set = HoldTracker("set", cap=t_latch)
        self._reset = HoldTracker("reset", cap=t_latch)

    def start(self):
        return (self._set.start(), self._reset.start(), 0)

    def step(self, state, a: Mapping[str, int]):
        hs, hr, prev = state
        hs = self._set.step(hs, a)
        hr = self._reset.step(hr, a)
        t, b = self.t_latch, self.b
        if b == 1 and HoldTracker.value(hr, 0) >= t and HoldTracker.value(hs, 1) >= t:
            v = 1
        elif b == 0 and HoldTracker.value(hr, 1) >= t and HoldTracker.value(hs, 0) >= t:
            v = 1
        elif a["set"] == a["reset"] == 1 and prev > 0:
            v = 1
        else:
            v = 0
        return (hs, hr, v)

    @staticmethod
    def value(state) -> int:
        return state[2]


class TimeMachine(Transducer):
    """Unbounded step counter; the single output pin shows the count's parity."""

    def __init__(self, pins=("a",)):
        self.input_pins = sorted_pins(pins)
        self.output_pins = ("parity",)
        self.initial_state = 0

    def step(self, state, a):
        return state + 1

    def out(self, state):
        return (state & 1,)
