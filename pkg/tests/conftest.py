"""Reference oracles written directly from the trace-level definitions.

They recompute everything from whole traces with the pure observers, never
touching the incremental gate state or the search tables.
"""
import itertools

import pytest

from circuit_fsm import observers as obs
from circuit_fsm.core import all_samples, to_dicts


def nand_oracle(w, pins, t, x0):
    """Output sequence of a hold-last NAND, recomputed from each prefix."""
    outs = [x0]
    for i in range(1, len(w) + 1):
        prefix = w[:i]
        if any(obs.hold(prefix, p, 0) >= t for p in pins):
            outs.append(1)
        elif all(obs.hold(prefix, p, 1) >= t for p in pins):
            outs.append(0)
        else:
            outs.append(outs[-1])
    return outs


def or_oracle(w, pins, t, x0):
    outs = [x0]
    for i in range(1, len(w) + 1):
        prefix = w[:i]
        if any(obs.hold(prefix, p, 1) >= t for p in pins):
            outs.append(1)
        elif all(obs.hold(prefix, p, 0) >= t for p in pins):
            outs.append(0)
        else:
            outs.append(outs[-1])
    return outs


def all_traces(pins, depth):
    """Every trace up to ``depth`` in canonical (length, then lexicographic) order."""
    samples = to_dicts(sorted(pins), all_samples(sorted(pins)))
    for d in range(depth + 1):
        for w in itertools.product(samples, repeat=d):
            yield list(w)


@pytest.fixture
def traces():
    return all_traces


ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the status stays FAIL unless the body finishes."""
    import time

    class Recorder:
        def __call__(self, number, title):
            self.key = number
            self.t0 = time.perf_counter()
            ACCEPTANCE[number] = (title, "FAIL", 0.0, "")
            return self

        def note(self, text):
            title, status, dt, _ = ACCEPTANCE[self.key]
            ACCEPTANCE[self.key] = (title, status, dt, text)

        def elapsed(self):
            return time.perf_counter() - self.t0

        def done(self):
            title, _, _, text = ACCEPTANCE[self.key]
            ACCEPTANCE[self.key] = (title, "PASS", self.elapsed(), text)

    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, status, dt, text = ACCEPTANCE[number]
        extra = f" [{text}]" if text else ""
        terminalreporter.write_line(f"criterion {number}: {status} {title} ({dt:.1f} s){extra}")
