import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circuit_fsm import (
    AdderParams, External, Factor, GateParams, Policy, ProductSpec, TableMachine,
    compose, evaluate, induced_inputs, is_feedback_free, make_adder_bit, make_nand,
    make_nand7, make_ripple_adder, make_sr_latch, run,
)
from circuit_fsm import product as product_mod
from circuit_fsm.errors import SpecInvalid
from circuit_fsm.product import DetProduct, Product, theorem1_check

from conftest import all_traces


def nand(t=1, x0=1, pins=("1", "2"), policy=Policy.HOLD_LAST):
    return make_nand(GateParams(pins, t, x0, policy))


def single(m, rename=None):
    rename = rename or {p: p for p in m.input_pins}
    wiring = {(0, p): External(rename[p]) for p in m.input_pins}
    return ProductSpec([m], wiring, {q: (0, q) for q in m.output_pins}, tuple(rename.values()))


def test_degenerate_product_equals_factor():
    m = nand(2)
    c = compose(single(m))
    assert isinstance(c, DetProduct)
    for w in all_traces(m.input_pins, 5):
        assert evaluate(c, w) == evaluate(m, w)


def test_adversarial_factor_gives_nondeterministic_product():
    c = compose(single(nand(1, policy=Policy.ADVERSARIAL)))
    assert type(c) is Product and not c.deterministic
    assert c.n_choices == 2


def test_mixed_radix_choice_encoding():
    adv = nand(1, policy=Policy.ADVERSARIAL)
    spec = ProductSpec(
        [adv, nand(1), adv],
        {(i, p): External(p) for i in range(3) for p in ("1", "2")},
        {"a": (0, "out"), "b": (2, "out")},
        ("1", "2"),
    )
    c = compose(spec)
    assert c.n_choices == 4
    for idx in range(4):
        assert c.decode_choice(idx) == (idx // 2, 0, idx % 2)
    # the first factor is the most significant digit
    starts = c.initial_branches()
    assert [k for k, _ in starts] == [0, 1, 2, 3]
    for k, s in starts:
        assert c.out(s) == c.decode_choice(k)[::2]


def test_spec_validation():
    g = nand()
    with pytest.raises(SpecInvalid, match="not driven"):
        ProductSpec([g], {(0, "1"): External("x")}, {"o": (0, "out")}, ("x",)).validate()
    with pytest.raises(SpecInvalid, match="unknown input"):
        ProductSpec([g], {(0, "1"): External("y"), (0, "2"): External("x")}, {"o": (0, "out")}, ("x",)).validate()
    with pytest.raises(SpecInvalid, match="missing factor"):
        ProductSpec([g], {(0, "1"): External("x"), (0, "2"): Factor(3, "out")}, {"o": (0, "out")}, ("x",)).validate()
    with pytest.raises(SpecInvalid, match="unknown output"):
        ProductSpec([g], {(0, "1"): External("x"), (0, "2"): External("x")}, {"o": (0, "q")}, ("x",)).validate()
    with pytest.raises(SpecInvalid):
        ProductSpec([], {}, {}, ()).validate()


def test_wires_cannot_compute():
    # a connection is a pin reference, nothing else
    g = nand()
    for src in (lambda a: 1 - a["x"], ("x",), "x", 1):
        spec = ProductSpec([g], {(0, "1"): External("x"), (0, "2"): src}, {"o": (0, "out")}, ("x",))
        with pytest.raises(SpecInvalid, match="External or Factor"):
            spec.validate()


def test_latch_first_step_reads_initial_outputs():
    latch = make_sr_latch(1, (1, 0))
    for a in ({"set": 0, "reset": 1}, {"set": 1, "reset": 0}):
        u1, u2 = induced_inputs(latch.spec, [a])
        assert u1 == [{"1": a["reset"], "2": 0}]  # qbar's initial output
        assert u2 == [{"1": a["set"], "2": 1}]  # q's initial output


def test_empty_trace_induces_empty_traces():
    for spec in (make_sr_latch(1).spec, make_nand7(1), make_ripple_adder(2).spec):
        assert induced_inputs(spec, []) == [[] for _ in spec.factors]


def test_induced_lengths():
    rng = random.Random(1)
    spec = make_nand7(1)
    for _ in range(100):
        w = [{str(k): rng.randint(0, 1) for k in range(1, 8)} for _ in range(rng.randint(0, 12))]
        assert all(len(u) == len(w) for u in induced_inputs(spec, w))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), max_size=25))
def test_exposure_of_factor_evals_equals_composite(rows):
    spec = make_sr_latch(1).spec
    w = [{"set": s, "reset": r} for s, r in rows]
    us = induced_inputs(spec, w)
    expected = {"q": evaluate(spec.factors[0], us[0])["out"], "qbar": evaluate(spec.factors[1], us[1])["out"]}
    assert evaluate(compose(spec), w) == expected


def test_feedback_is_delayed_one_step():
    # swap the source of the feedback wire for machines that share its initial output
    # but react differently; after one sample the reader must not notice
    reader = nand(1, 1)
    variants = [
        nand(1, 0),
        nand(3, 0),
        TableMachine(("1", "2"), ("out",), [[1, 1, 1, 1], [0, 0, 0, 0]], [(0,), (1,)]),
    ]
    firsts = set()
    for src in variants:
        spec = ProductSpec(
            [reader, src],
            {(0, "1"): External("r"), (0, "2"): Factor(1, "out"),
             (1, "1"): External("s"), (1, "2"): Factor(0, "out")},
            {"q": (0, "out")},
            ("r", "s"),
        )
        m = compose(spec)
        for a in ((0, 0), (0, 1), (1, 0), (1, 1)):
            firsts.add((a, m.step(m.initial_state, a)[0]))
    assert len(firsts) == 4


@pytest.mark.parametrize("name,spec,depth", [
    ("latch", make_sr_latch(1).spec, 5),
    ("latch_t2_cold", make_sr_latch(2, (0, 0)).spec, 5),
    ("nand7", make_nand7(1), 4),
    ("ripple2", make_ripple_adder(2).spec, 3),
])
def test_theorem1(name, spec, depth):
    v = theorem1_check(spec, depth, random_trials=30, random_len=30, seed=3)
    assert v.status == "PASS"
    n = 2 ** len(spec.input_pins)
    assert v.traces_explored == sum(n ** d for d in range(depth + 1)) + 30 * 31


def test_theorem1_catches_zero_delay_composition(monkeypatch):
    # mutant: later factors see the freshly stepped outputs of earlier ones
    def eager_step(self, state, a):
        new = list(state)
        for i, f in enumerate(self.factors):
            outs = [g.out(s) for g, s in zip(self.factors, new)]
            new[i] = f.step(new[i], self._inputs(outs, a)[i])
        return tuple(new)

    monkeypatch.setattr(DetProduct, "step", eager_step)
    v = theorem1_check(make_sr_latch(1).spec, 3)
    assert v.status == "FAIL"
    assert v.counterexample


def test_theorem1_rejects_nondeterministic_factors():
    with pytest.raises(SpecInvalid):
        theorem1_check(single(nand(1, policy=Policy.ADVERSARIAL)), 2)


def test_feedback_free():
    assert is_feedback_free(make_nand7(1))
    assert not is_feedback_free(make_sr_latch(1).spec)
    assert is_feedback_free(single(nand()))
    assert is_feedback_free(make_ripple_adder(3).spec)
    # a gate feeding itself
    loop = ProductSpec([nand()], {(0, "1"): External("x"), (0, "2"): Factor(0, "out")}, {"o": (0, "out")}, ("x",))
    assert not is_feedback_free(loop)


def test_feedback_free_looks_inside_nested_products():
    inner = compose(make_sr_latch(1).spec)
    outer = ProductSpec([inner], {(0, "set"): External("s"), (0, "reset"): External("r")},
                        {"q": (0, "q")}, ("r", "s"))
    assert not is_feedback_free(outer)
    assert is_feedback_free(outer, recursive=False)


def test_nested_product_behaves_like_flat_one():
    inner = compose(make_sr_latch(1).spec)
    outer = compose(ProductSpec([inner], {(0, "set"): External("s"), (0, "reset"): External("r")},
                                {"q": (0, "q")}, ("r", "s")))
    for w in all_traces(("reset", "set"), 5):
        renamed = [{"s": a["set"], "r": a["reset"]} for a in w]
        assert evaluate(outer, renamed)["q"] == evaluate(inner, w)["q"]


def test_ripple_n1_is_a_renamed_adder_bit():
    d = make_adder_bit(AdderParams(1))
    v = compose(make_ripple_adder(1).spec)
    for w in all_traces(v.input_pins, 5):
        u = [{"carry_in": a["carry_in"], "v1": a["v1_1"], "v2": a["v2_1"]} for a in w]
        o = evaluate(d, u)
        assert evaluate(v, w) == {"r_1": o["sum"], "carry_out": o["carry_out"]}
