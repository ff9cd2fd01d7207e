import json
from pathlib import Path

import pytest

from circuit_fsm import compose, equivalent, evaluate, make_sr_latch, run
from circuit_fsm.errors import ParseError, PinMismatch, ValidationError
from circuit_fsm.netlist import load_netlist, lower, parse_netlist, to_machine
from circuit_fsm.waveform import read_stimulus, vcd_id, write_csv, write_stimulus, write_vcd

from conftest import all_traces

NETLISTS = Path(__file__).resolve().parents[1] / "netlists"


def doc(**over):
    base = {
        "name": "g",
        "inputs": ["a", "b"],
        "outputs": [{"name": "y", "from": "n.out"}],
        "instances": [{"name": "n", "kind": "nand", "params": {"t": 1}}],
        "wires": [{"to": "n.1", "from": "a"}, {"to": "n.2", "from": "b"}],
    }
    base.update(over)
    return json.dumps(base)


@pytest.mark.parametrize("path", sorted(NETLISTS.glob("*.json")), ids=lambda p: p.name)
def test_shipped_netlists_load(path):
    nl = load_netlist(path)
    m = to_machine(nl)
    assert list(m.output_pins) == nl.output_names


def test_shipped_latch_is_one_builtin_instance():
    nl = load_netlist(NETLISTS / "sr_latch.json")
    assert [(i.name, i.kind) for i in nl.instances] == [("L", "sr_latch")]


def test_gate_level_latch_matches_builtin():
    gates = to_machine(load_netlist(NETLISTS / "sr_latch_gates.json"))
    builtin = to_machine(load_netlist(NETLISTS / "sr_latch.json"))
    v = equivalent(gates, builtin, 6)
    assert v.passed and v.details["exact"]
    v = equivalent(gates, compose(make_sr_latch(1).spec), 6)
    assert v.passed


def test_subcircuits_instantiate_independently():
    m = to_machine(load_netlist(NETLISTS / "latch_pair.json"))
    w = [{"set": 1, "reset": 0, "set2": 0, "reset2": 1}] * 5
    assert evaluate(m, w) == {"q1": 1, "q2": 0}


def test_default_parameters():
    m = to_machine(parse_netlist(doc()))
    assert evaluate(m, []) == {"y": 1}
    m = to_machine(parse_netlist(doc(instances=[{"name": "n", "kind": "or"}])))
    assert evaluate(m, []) == {"y": 0}


def test_malformed_json_reports_position():
    with pytest.raises(ParseError) as e:
        parse_netlist('{\n  "name": "x",\n  "inputs": [,]\n}')
    assert e.value.line == 3


def test_schema_violation():
    with pytest.raises(ValidationError, match="inputs"):
        parse_netlist(doc(inputs="a"))
    with pytest.raises(ValidationError):
        parse_netlist(doc(inputs=["a b"]))


def test_doubly_driven_pin_is_named():
    wires = [{"to": "n.1", "from": "a"}, {"to": "n.2", "from": "b"}, {"to": "n.1", "from": "b"}]
    with pytest.raises(ValidationError, match=r"n\.1"):
        parse_netlist(doc(wires=wires))


def test_unknown_kind():
    with pytest.raises(ValidationError, match="kind"):
        parse_netlist(doc(instances=[{"name": "n", "kind": "xor"}]))


@pytest.mark.parametrize("over,msg", [
    ({"wires": [{"to": "n.1", "from": "a"}]}, "not driven"),
    ({"wires": [{"to": "n.1", "from": "a"}, {"to": "n.2", "from": "zz"}]}, "not a netlist input"),
    ({"wires": [{"to": "n.1", "from": "a"}, {"to": "n.2", "from": "m.out"}]}, "unknown instance"),
    ({"wires": [{"to": "n.1", "from": "a"}, {"to": "n.9", "from": "b"}]}, "no input pin"),
    ({"outputs": [{"name": "y", "from": "n.q"}]}, "no output"),
    ({"instances": [{"name": "n", "kind": "nand", "params": {"t": 0}}]}, "must be >= 1"),
    ({"instances": [{"name": "n", "kind": "nand"}, {"name": "n", "kind": "or"}]}, "duplicate instance"),
    ({"instances": [{"name": "n", "kind": "sub", "params": {"ref": "nope"}}]}, "nope"),
])
def test_invalid_netlists(over, msg):
    with pytest.raises(ValidationError, match=msg):
        parse_netlist(doc(**over))


def test_recursive_subcircuit_rejected():
    sub = json.loads(doc(name="loop", instances=[{"name": "n", "kind": "sub", "params": {"ref": "loop"}}]))
    sub["wires"] = []
    sub["outputs"] = [{"name": "y", "from": "n.y"}]
    with pytest.raises(ValidationError):
        parse_netlist(doc(instances=[{"name": "n", "kind": "sub", "params": {"ref": "loop"}}],
                          wires=[], subcircuits=[sub]))


def test_feedback_through_wires_is_delayed():
    # a NAND feeding itself: output toggles each step while the enable is high
    text = doc(inputs=["en"], wires=[{"to": "n.1", "from": "en"}, {"to": "n.2", "from": "n.out"}])
    m = to_machine(parse_netlist(text))
    assert [o["y"] for o in run(m, [{"en": 1}] * 4)] == [1, 0, 1, 0, 1]


def test_stimulus_roundtrip():
    trace = [{"a": 1, "b": 0}, {"a": 0, "b": 0}]
    text = write_stimulus(["a", "b"], trace)
    assert text == "tick,a,b\n0,1,0\n1,0,0\n"
    assert read_stimulus(text, ["b", "a"]) == trace


@pytest.mark.parametrize("text,err", [
    ("tick,a\n0,1\n", PinMismatch),
    ("", ValidationError),
    ("t,a,b\n", ValidationError),
    ("tick,a,b\n1,0,0\n", ValidationError),
    ("tick,a,b\n0,0,2\n", ValidationError),
    ("tick,a,b\n0,0\n", ValidationError),
    ("tick,a,a\n", ValidationError),
])
def test_stimulus_errors(text, err):
    with pytest.raises(err):
        read_stimulus(text, ["a", "b"])


def test_empty_stimulus_gives_tick0_only():
    m = to_machine(load_netlist(NETLISTS / "sr_latch.json"))
    outs = run(m, read_stimulus("tick,set,reset\n", ["set", "reset"]))
    assert write_vcd(["q", "qbar"], outs) == (
        "$timescale 1 ns $end\n$var wire 1 ! q $end\n$var wire 1 \" qbar $end\n"
        "$enddefinitions $end\n#0\n1!\n0\"\n")
    assert write_csv(["q", "qbar"], outs) == "tick,q,qbar\n0,1,0\n"


def test_vcd_ids_are_unique_printable():
    ids = [vcd_id(k) for k in range(500)]
    assert len(set(ids)) == 500
    assert ids[0] == "!" and ids[93] == "~" and ids[94] == "!!"
    assert all(33 <= ord(c) <= 126 for i in ids for c in i)


def test_gate_level_latch_matches_on_all_short_traces():
    gates = to_machine(load_netlist(NETLISTS / "sr_latch_gates.json"))
    builtin = compose(make_sr_latch(1).spec)
    for w in all_traces(("reset", "set"), 5):
        assert evaluate(gates, w) == evaluate(builtin, w)
