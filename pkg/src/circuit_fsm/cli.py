"""Command line entry point: ``circuit-fsm {run,check,info,minimize,monoid}``.

Exit codes: 0 success / PASS, 1 FAIL with a counterexample, 2 usage,
validation or budget errors.
"""
from __future__ import annotations

import argparse
import sys

from . import algebra, checker
from .circuits import make_nand7, make_ripple_adder, make_sr_latch
from .core import minimize, reachable_states, run
from .errors import CircuitError, StateBudgetExceeded, UnknownProperty
from .gates import GateParams, Policy, make_nand
from .netlist import load_netlist, lower, to_machine
from .product import compose, is_feedback_free, theorem1_check
from .waveform import read_stimulus, write_csv, write_stimulus, write_vcd

PROPERTIES = ("gate_constraints", "stability_lemma", "latch_claim", "adder_lemma", "ripple_star", "theorem1")

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _yes(b):
    return "yes" if b else "no"


def _params(pairs):
    out = {}
    for p in pairs:
        key, sep, value = p.partition("=")
        if not sep:
            raise CircuitError(f"parameter {p!r} is not key=value")
        out[key] = value
    return out


def cmd_run(args):
    nl = load_netlist(args.netlist)
    m = to_machine(nl)
    with open(args.stimulus) as fh:
        trace = read_stimulus(fh.read(), nl.inputs)
    outputs = run(m, trace)
    pins = nl.output_names
    text = write_vcd(pins, outputs) if args.format == "vcd" else write_csv(pins, outputs)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return EXIT_PASS


def _theorem1(args, p):
    depth = args.depth if args.depth is not None else int(p.get("depth", 4))
    trials = int(p.get("trials", 100))
    length = int(p.get("len", 50))
    if args.netlist:
        spec = lower(load_netlist(args.netlist))
        # a lone builtin composite is checked on its own construction
        if len(spec.factors) == 1 and hasattr(spec.factors[0], "spec"):
            spec = spec.factors[0].spec
    else:
        circuit = p.get("circuit", "sr_latch")
        t = int(p.get("t", 1))
        spec = {
            "sr_latch": lambda: make_sr_latch(t).spec,
            "nand7": lambda: make_nand7(t),
            "ripple_adder": lambda: make_ripple_adder(int(p.get("n", 2)), t).spec,
        }[circuit]()
    return theorem1_check(spec, depth, trials, length, args.seed, max_nodes=args.budget)


def _dispatch_check(args):
    p = _params(args.params)
    policy = Policy(p.get("policy", args.policy))
    budget = args.budget

    def depth(default):
        return args.depth if args.depth is not None else int(p.get("depth", default))

    name = args.property
    if name == "gate_constraints":
        t = int(p.get("t", 1))
        if args.netlist:
            m = to_machine(load_netlist(args.netlist), policy)
        else:
            m = make_nand(GateParams(("1", "2"), t, int(p.get("initial", 1)), policy))
        from .gates import check_gate_constraints

        return m, check_gate_constraints(m, t, depth(6), max_nodes=budget)
    if name == "stability_lemma":
        return None, checker.check_stability_lemma(
            int(p.get("t", 2)), int(p.get("k", 0)), depth(8), policy, max_nodes=budget)
    if name == "latch_claim":
        t = int(p.get("t", 1))
        initials = tuple(int(x) for x in p.get("initials", "1,0").split(","))
        v = checker.check_latch_claim(t, int(p.get("slack", 4)), policy, initials, max_nodes=budget)
        m = compose(make_sr_latch(t, initials, policy).spec)
        return m, v
    if name == "adder_lemma":
        return None, checker.check_adder_lemma(
            int(p.get("t", 1)), int(p.get("k", 0)), depth(7), max_nodes=budget)
    if name == "ripple_star":
        return None, checker.check_ripple_star(
            int(p.get("n", 2)), int(p.get("t", 1)), int(p.get("prefix_len", 5)),
            int(p.get("trials", 10)), args.seed)
    if name == "theorem1":
        return None, _theorem1(args, p)
    raise UnknownProperty(f"unknown property {name!r}; choose from {', '.join(PROPERTIES)}")


def cmd_check(args):
    m, v = _dispatch_check(args)
    print(f"{args.property}: {v.status}")
    print(f"traces explored: {v.traces_explored}")
    tight = v.details.get("tightness")
    if tight is not None:
        print(f"tightness probe (t_latch={v.details['t_latch'] - 1}): {tight.status}")
    if v.status == "FAIL":
        pins = sorted(v.counterexample[0]) if v.counterexample else (m.input_pins if m else [])
        doc = write_stimulus(pins, v.counterexample)
        print("counterexample stimulus:")
        sys.stdout.write(doc)
        if v.choices is not None:
            print("branch choices: " + " ".join(map(str, v.choices)))
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(doc)
        return EXIT_FAIL
    return EXIT_PASS if v.status == "PASS" else EXIT_ERROR


def cmd_info(args):
    nl = load_netlist(args.netlist)
    spec = lower(nl)
    m = compose(spec)
    print(f"name: {nl.name}")
    print(f"inputs: {' '.join(nl.inputs)}")
    print(f"outputs: {' '.join(nl.output_names)}")
    print(f"instances: {len(nl.instances)}")
    print(f"feedback-free: {_yes(is_feedback_free(spec))}")
    print(f"reachable states: {len(reachable_states(m, args.budget or 100_000))}")
    return EXIT_PASS


def cmd_minimize(args):
    m = to_machine(load_netlist(args.netlist))
    budget = args.budget or 100_000
    print(f"reachable states: {len(reachable_states(m, budget))}")
    print(f"minimized states: {minimize(m, budget).n_states}")
    return EXIT_PASS


def cmd_monoid(args):
    nl = load_netlist(args.netlist)
    spec = lower(nl)
    m = compose(spec)
    budget = args.budget or 100_000
    mon = algebra.monoid(m, max_elements=budget, max_states=budget)
    st = mon.stats()
    print(f"monoid size: {st['size']}")
    print(f"minimized states: {st['states']}")
    print(f"generators: {st['generators']}")
    print(f"idempotents: {st['idempotents']}")
    print(f"non-identity units: {_yes(st['nontrivial_units'])}")
    print(f"feedback-free: {_yes(is_feedback_free(spec))}")
    print(f"combinational: {_yes(algebra.is_combinational(m, budget))}")
    print(f"laws: {algebra.monoid_laws(mon, 1000, args.seed).status}")
    return EXIT_PASS


def build_parser():
    ap = argparse.ArgumentParser(prog="circuit-fsm", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, netlist_required=True):
        p.add_argument("--netlist", required=netlist_required, help="netlist JSON document")
        p.add_argument("--budget", type=int, default=0, help="state / trace budget (0: default)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("run", help="simulate a netlist on a stimulus")
    common(p)
    p.add_argument("--stimulus", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("vcd", "csv"), default="vcd")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="bounded check of a named property")
    common(p, netlist_required=False)
    p.add_argument("property")
    p.add_argument("params", nargs="*", help="key=value parameters")
    p.add_argument("--depth", type=int)
    p.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.HOLD_LAST.value)
    p.add_argument("--out", help="write the counterexample stimulus here")
    p.set_defaults(func=cmd_check)

    for name, fn, text in (("info", cmd_info, "netlist summary"),
                           ("minimize", cmd_minimize, "minimized state count"),
                           ("monoid", cmd_monoid, "transformation monoid report")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args, extra = ap.parse_known_args(argv)
    # key=value parameters may follow options, which argparse will not interleave
    if args.command == "check":
        args.params += [x for x in extra if "=" in x and not x.startswith("-")]
        extra = [x for x in extra if x not in args.params]
    if extra:
        ap.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        return args.func(args)
    except StateBudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (CircuitError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
