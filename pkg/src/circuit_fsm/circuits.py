"""The constructed devices: cross-coupled NAND latch, 7-input NAND, ripple adder."""
from __future__ import annotations

from dataclasses import dataclass

from .core import Transducer, as_sample
from .errors import EmptyTrace
from .gates import AdderParams, GateParams, Policy, make_adder_bit, make_nand
from .observers import unsigned
from .product import External, Factor, ProductSpec, compose


@dataclass
class LatchSpec:
    base_delay_t: int
    gate_initials: tuple[int, int]
    spec: ProductSpec


@dataclass
class RippleSpec:
    n_bits: int
    bit_delay_t: int
    spec: ProductSpec


def _nand(pins, t, initial, policy):
    return make_nand(GateParams(pins, t, initial, policy))


def make_sr_latch(t: int = 1, gate_initials=(1, 0), policy=Policy.HOLD_LAST) -> LatchSpec:
    """Two NANDs on pins ``1, 2``; gate 0 drives ``q`` and reads ``reset``."""
    if t < 1:
        raise ValueError("t must be at least 1")
    n1 = _nand(("1", "2"), t, gate_initials[0], policy)
    n2 = _nand(("1", "2"), t, gate_initials[1], policy)
    wiring = {
        (0, "1"): External("reset"),
        (0, "2"): Factor(1, "out"),
        (1, "1"): External("set"),
        (1, "2"): Factor(0, "out"),
    }
    exposure = {"q": (0, "out"), "qbar": (1, "out")}
    spec = ProductSpec([n1, n2], wiring, exposure, ("set", "reset"))
    spec.validate()
    return LatchSpec(t, tuple(gate_initials), spec)


def latch_q(latch: LatchSpec):
    """The latch projected onto its ``q`` output."""
    s = latch.spec
    return compose(ProductSpec(s.factors, s.wiring, {"q": s.exposure["q"]}, s.input_pins))


def make_nand7(t: int = 1, initials=(1, 1, 1), policy=Policy.HOLD_LAST) -> ProductSpec:
    if t < 1:
        raise ValueError("t must be at least 1")
    pins = ("1", "2", "3")
    gates = [_nand(pins, t, x, policy) for x in initials]
    wiring = {}
    for k in range(3):
        wiring[(0, pins[k])] = External(str(k + 1))
        wiring[(1, pins[k])] = External(str(k + 4))
    wiring[(2, "1")] = External("7")
    wiring[(2, "2")] = Factor(0, "out")
    wiring[(2, "3")] = Factor(1, "out")
    spec = ProductSpec(gates, wiring, {"out": (2, "out")}, tuple(str(k) for k in range(1, 8)))
    spec.validate()
    return spec


def ripple_pins(n: int):
    inputs = ["carry_in"] + [f"v1_{i}" for i in range(1, n + 1)] + [f"v2_{i}" for i in range(1, n + 1)]
    outputs = [f"r_{i}" for i in range(1, n + 1)] + ["carry_out"]
    return inputs, outputs


def make_ripple_adder(n: int, t: int = 1, initials=None) -> RippleSpec:
    """``n`` single-bit adders; bit ``i`` takes its carry from bit ``i-1``'s output."""
    if n < 1 or t < 1:
        raise ValueError("n and t must be at least 1")
    if initials is None:
        initials = [(0, 0)] * n
    if len(initials) != n:
        raise ValueError("need one (sum, carry) initial pair per bit")
    bits = [make_adder_bit(AdderParams(t, s, c)) for s, c in initials]
    wiring = {(0, "carry_in"): External("carry_in")}
    for i in range(n):
        wiring[(i, "v1")] = External(f"v1_{i + 1}")
        wiring[(i, "v2")] = External(f"v2_{i + 1}")
        if i:
            wiring[(i, "carry_in")] = Factor(i - 1, "carry_out")
    exposure = {f"r_{i + 1}": (i, "sum") for i in range(n)}
    exposure["carry_out"] = (n - 1, "carry_out")
    inputs, _ = ripple_pins(n)
    spec = ProductSpec(bits, wiring, exposure, inputs)
    spec.validate()
    return RippleSpec(n, t, spec)


def star_sides(n: int, a, outputs) -> tuple[int, int]:
    """Both sides of the adder identity for input sample ``a`` and output vector ``outputs``.

    The carry input is added as an extra term next to the two operands.
    """
    lhs = (unsigned([a[f"v1_{i}"] for i in range(1, n + 1)]) + a["carry_in"]
           + unsigned([a[f"v2_{i}"] for i in range(1, n + 1)]))
    rhs = unsigned([outputs[f"r_{i}"] for i in range(1, n + 1)]) + (outputs["carry_out"] << n)
    return lhs, rhs


def adder_star_property(v: RippleSpec, w, machine: Transducer | None = None) -> bool:
    if not w:
        raise EmptyTrace("the adder identity needs a last sample")
    m = machine if machine is not None else compose(v.spec)
    s = m.initial_state
    for a in w:
        s = m.step(s, as_sample(m.input_pins, a))
    lhs, rhs = star_sides(v.n_bits, dict(w[-1]), m.outputs(s))
    return lhs == rhs
