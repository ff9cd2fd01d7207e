"""JSON netlists: parsing, validation and lowering to products.

A netlist names its input pins, a list of component instances, the wires
driving every instance input pin, and which instance outputs it exposes.
Wire sources are either a netlist input (``"set"``) or an instance output
(``"g1.out"``).  Instances of kind ``sub`` refer to an entry of the optional
``subcircuits`` list by name.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from .circuits import make_nand7, make_ripple_adder, make_sr_latch
from .core import Machine
from .errors import CircuitError, ParseError, ValidationError
from .gates import AdderParams, GateParams, Policy, make_adder_bit, make_nand, make_or
from .product import External, Factor, ProductSpec, compose

_TOKEN = re.compile(r"^[A-Za-z0-9_]+$")
KINDS = ("nand", "or", "adder_bit", "sr_latch", "nand7", "ripple_adder", "sub")


def schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("netlist.schema.json").read_text())


@dataclass
class Instance:
    name: str
    kind: str
    params: dict = field(default_factory=dict)


@dataclass
class Netlist:
    name: str
    inputs: list[str]
    outputs: list[tuple[str, str, str]]  # (netlist pin, instance, instance pin)
    instances: list[Instance]
    wires: list[tuple[str, str, str]]  # (instance, instance pin, source)
    subcircuits: dict[str, "Netlist"] = field(default_factory=dict)

    @property
    def output_names(self) -> list[str]:
        return [o[0] for o in self.outputs]


def _split(ref):
    inst, _, pin = ref.partition(".")
    return inst, pin


def parse_netlist(text: str) -> Netlist:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "document"
        raise ValidationError(f"{where}: {e.message}") from None
    nl = _build(doc, {})
    validate_netlist(nl)
    return nl


def load_netlist(path) -> Netlist:
    with open(path) as fh:
        return parse_netlist(fh.read())


def _build(doc, outer_subs) -> Netlist:
    subs = dict(outer_subs)
    for sd in doc.get("subcircuits", []):
        subs[sd["name"]] = None  # allow forward references among siblings
    built = {}
    for sd in doc.get("subcircuits", []):
        built[sd["name"]] = _build(sd, subs)
    subs.update(built)
    return Netlist(
        name=doc["name"],
        inputs=list(doc["inputs"]),
        outputs=[(o["name"], *_split(o["from"])) for o in doc["outputs"]],
        instances=[Instance(i["name"], i["kind"], dict(i.get("params", {}))) for i in doc["instances"]],
        wires=[(*_split(w["to"]), w["from"]) for w in doc["wires"]],
        subcircuits={k: v for k, v in subs.items() if v is not None},
    )


def _int_param(inst, key, default, lo=None, choices=None):
    v = inst.params.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"instance {inst.name!r}: parameter {key!r} must be an integer")
    if lo is not None and v < lo:
        raise ValidationError(f"instance {inst.name!r}: parameter {key!r} must be >= {lo}")
    if choices is not None and v not in choices:
        raise ValidationError(f"instance {inst.name!r}: parameter {key!r} must be one of {choices}")
    return v


def _levels(inst, key, default, n):
    v = inst.params.get(key, default)
    if not (isinstance(v, list) and len(v) == n and all(x in (0, 1) and not isinstance(x, bool) for x in v)):
        raise ValidationError(f"instance {inst.name!r}: parameter {key!r} must be a list of {n} levels")
    return tuple(v)


def _gate_pins(inst):
    pins = inst.params.get("pins", ["1", "2"])
    if not (isinstance(pins, list) and pins and all(isinstance(p, str) and _TOKEN.match(p) for p in pins)):
        raise ValidationError(f"instance {inst.name!r}: 'pins' must be a non-empty list of pin names")
    if len(set(pins)) != len(pins):
        raise ValidationError(f"instance {inst.name!r}: duplicate gate pins")
    return tuple(pins)


def instance_machine(inst: Instance, nl: Netlist, policy=Policy.HOLD_LAST, _stack=()) -> Machine:
    """Build the machine for one instance, checking its parameters."""
    policy = Policy(policy)
    k = inst.kind
    if k in ("nand", "or"):
        pins = _gate_pins(inst)
        t = _int_param(inst, "t", 1, lo=1)
        init = _int_param(inst, "initial", 1 if k == "nand" else 0, choices=(0, 1))
        if k == "or" and policy is not Policy.HOLD_LAST:
            raise ValidationError(f"instance {inst.name!r}: OR gates have no adversarial form")
        maker = make_nand if k == "nand" else make_or
        return maker(GateParams(pins, t, init, policy))
    if k == "adder_bit":
        return make_adder_bit(AdderParams(
            _int_param(inst, "t", 1, lo=1),
            _int_param(inst, "initial_sum", 0, choices=(0, 1)),
            _int_param(inst, "initial_carry", 0, choices=(0, 1)),
        ))
    if k == "sr_latch":
        t = _int_param(inst, "t", 1, lo=1)
        return compose(make_sr_latch(t, _levels(inst, "initials", [1, 0], 2), policy).spec)
    if k == "nand7":
        t = _int_param(inst, "t", 1, lo=1)
        return compose(make_nand7(t, _levels(inst, "initials", [1, 1, 1], 3), policy))
    if k == "ripple_adder":
        n = _int_param(inst, "n", 2, lo=1)
        t = _int_param(inst, "t", 1, lo=1)
        raw = inst.params.get("initials", [[0, 0]] * n)
        if not (isinstance(raw, list) and len(raw) == n and all(
                isinstance(p, list) and len(p) == 2 and all(x in (0, 1) for x in p) for p in raw)):
            raise ValidationError(f"instance {inst.name!r}: 'initials' must list {n} [sum, carry] pairs")
        return compose(make_ripple_adder(n, t, [tuple(p) for p in raw]).spec)
    if k == "sub":
        ref = inst.params.get("ref")
        if ref not in nl.subcircuits:
            raise ValidationError(f"instance {inst.name!r}: unknown subcircuit {ref!r}")
        if ref in _stack:
            raise ValidationError(f"instance {inst.name!r}: subcircuit {ref!r} includes itself")
        return to_machine(nl.subcircuits[ref], policy, _stack + (ref,))
    raise ValidationError(f"instance {inst.name!r}: unknown component kind {k!r}")


def validate_netlist(nl: Netlist, policy=Policy.HOLD_LAST):
    lower(nl, policy)


def lower(nl: Netlist, policy=Policy.HOLD_LAST, _stack=()) -> ProductSpec:
    if len(set(nl.inputs)) != len(nl.inputs):
        raise ValidationError(f"netlist {nl.name!r}: duplicate input pins")
    names = [i.name for i in nl.instances]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise ValidationError(f"duplicate instance name {sorted(dup)[0]!r}")
    index = {n: i for i, n in enumerate(names)}
    machines = [instance_machine(inst, nl, policy, _stack or (nl.name,)) for inst in nl.instances]
    wiring = {}
    for inst_name, pin, src in nl.wires:
        if inst_name not in index:
            raise ValidationError(f"wire to unknown instance {inst_name!r}")
        i = index[inst_name]
        if pin not in machines[i].input_pins:
            raise ValidationError(f"instance {inst_name!r} has no input pin {pin!r}")
        if (i, pin) in wiring:
            raise ValidationError(f"pin {inst_name}.{pin} is driven more than once")
        if "." in src:
            j_name, q = _split(src)
            if j_name not in index:
                raise ValidationError(f"wire source {src!r}: unknown instance {j_name!r}")
            if q not in machines[index[j_name]].output_pins:
                raise ValidationError(f"wire source {src!r}: instance {j_name!r} has no output {q!r}")
            wiring[(i, pin)] = Factor(index[j_name], q)
        else:
            if src not in nl.inputs:
                raise ValidationError(f"wire source {src!r} is not a netlist input")
            wiring[(i, pin)] = External(src)
    for i, m in enumerate(machines):
        for p in m.input_pins:
            if (i, p) not in wiring:
                raise ValidationError(f"pin {names[i]}.{p} is not driven")
    exposure = {}
    for name, inst_name, pin in nl.outputs:
        if name in exposure:
            raise ValidationError(f"output {name!r} declared twice")
        if inst_name not in index:
            raise ValidationError(f"output {name!r}: unknown instance {inst_name!r}")
        if pin not in machines[index[inst_name]].output_pins:
            raise ValidationError(f"output {name!r}: instance {inst_name!r} has no output {pin!r}")
        exposure[name] = (index[inst_name], pin)
    try:
        spec = ProductSpec(machines, wiring, exposure, tuple(nl.inputs))
        spec.validate()
    except CircuitError as e:
        raise ValidationError(str(e)) from None
    return spec


def to_machine(nl: Netlist, policy=Policy.HOLD_LAST, _stack=()) -> Machine:
    return compose(lower(nl, policy, _stack))
