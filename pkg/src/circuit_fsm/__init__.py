"""Digital circuits as Moore machines: simulation, products and bounded checking."""
from .core import (
    FunctionMachine,
    Machine,
    TableMachine,
    Transducer,
    Verdict,
    equivalent,
    evaluate,
    minimize,
    reachable_states,
    run,
)
from .gates import AdderParams, GateParams, Policy, make_adder_bit, make_nand, make_or
from .product import External, Factor, ProductSpec, compose, induced_inputs, is_feedback_free
from .circuits import make_nand7, make_ripple_adder, make_sr_latch, latch_q
from .kernels import BACKEND

__version__ = "0.1.0"
