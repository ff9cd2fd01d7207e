"""Time the compiled and numpy trace kernels on the same tabulated systems.

    python benchmarks/bench_kernels.py [--repeat N]

Each system is tabulated once; only the kernel call is timed.  Both kernels
must return identical (status, path, explored) triples.
"""
import argparse
import time

from circuit_fsm import AdderParams, GateParams, Policy, compose, make_adder_bit, make_nand, make_nand7, make_sr_latch
from circuit_fsm import _kernels_py, kernels
from circuit_fsm.checker import (
    AllOf, Always, Property, StableAtLeast, StableOutputAtLeast, StableOutputCoversHold, latch_properties,
)
from circuit_fsm.core import all_samples, to_dicts
from circuit_fsm.search import tabulate


def checker_system(m, props, depth):
    """The same joint system check_universal builds, returned as tables."""
    samples = all_samples(m.input_pins)
    dicts = to_dicts(m.input_pins, samples)
    nc = m.n_choices

    def successors(joint):
        s, mon = joint
        res = []
        for k, ad in enumerate(dicts):
            for c, ns in m.branches(s, samples[k]):
                out = m.outputs(ns)
                res.append((k * nc + c, (ns, tuple(p.step(st, ad, out) for p, st in zip(props, mon)))))
        return res

    starts = [(c, (s, tuple(p.start(m.outputs(s)) for p in props))) for c, s in m.initial_branches()]
    table, bad, start_ids, _ = tabulate(
        starts, successors, lambda j: any(p.violated(st) for p, st in zip(props, j[1])),
        len(samples) * nc, depth)
    return table, bad, start_ids, depth


def systems():
    yield "latch claim, t=1, depth 9", checker_system(
        compose(make_sr_latch(1).spec), latch_properties(5), 9)
    gate = make_nand(GateParams(("1", "2"), 2, 1, Policy.ADVERSARIAL))
    yield "stability lemma, adversarial t=2, depth 8", checker_system(
        gate, [Property("s", Always(), StableOutputCoversHold(gate.input_pins, 0, 2))], 8)
    d = make_adder_bit(AdderParams(1))
    yield "adder lemma, t=1 k=1, depth 7", checker_system(
        d, [Property("a", StableAtLeast(2), AllOf((StableOutputAtLeast(1, "sum"),
                                                   StableOutputAtLeast(1, "carry_out"))))], 7)
    n7 = compose(make_nand7(1))
    yield "nand7 full sweep (no bad states), depth 4", checker_system(
        n7, [Property("n", Always(), Always())], 4)


def best(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = fn(*args, 0)
        times.append(time.perf_counter() - t0)
    return min(times), res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    compiled = None
    if "cython" in kernels.available():
        from circuit_fsm._explore import explore as compiled
    print(f"{'system':45s} {'traces':>12s} {'numpy s':>9s} {'cython s':>9s} {'speedup':>8s}")
    for name, sysargs in systems():
        t_py, res_py = best(_kernels_py.explore, sysargs, args.repeat)
        row = f"{name:45s} {res_py[2]:12d} {t_py:9.3f}"
        if compiled is not None:
            t_c, res_c = best(compiled, sysargs, args.repeat)
            if tuple(res_c) != tuple(res_py):
                raise SystemExit(f"kernels disagree on {name}: {res_c} vs {res_py}")
            row += f" {t_c:9.3f} {t_py / t_c:8.1f}"
        print(row)


if __name__ == "__main__":
    main()
