"""Stimulus CSV input and VCD / CSV waveform output."""
from __future__ import annotations

import csv
import io

from .errors import PinMismatch, ValidationError


def read_stimulus(text: str, pins=None) -> list[dict[str, int]]:
    """Parse a stimulus CSV (``tick`` column then one column per input pin)."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise ValidationError("stimulus has no header")
    header = [c.strip() for c in rows[0]]
    if header[0] != "tick":
        raise ValidationError("first stimulus column must be 'tick'")
    names = header[1:]
    if len(set(names)) != len(names):
        raise ValidationError("duplicate pin column in stimulus")
    if pins is not None and set(names) != set(pins):
        raise PinMismatch(f"stimulus pins {sorted(names)} != netlist inputs {sorted(pins)}")
    trace = []
    for k, row in enumerate(rows[1:]):
        cells = [c.strip() for c in row]
        if len(cells) != len(header):
            raise ValidationError(f"stimulus row {k}: expected {len(header)} cells")
        if cells[0] != str(k):
            raise ValidationError(f"stimulus ticks must be contiguous from 0; got {cells[0]!r} at row {k}")
        sample = {}
        for name, c in zip(names, cells[1:]):
            if c not in ("0", "1"):
                raise ValidationError(f"stimulus row {k}, pin {name}: level must be 0 or 1")
            sample[name] = int(c)
        trace.append(sample)
    return trace


def write_stimulus(pins, trace) -> str:
    lines = [",".join(["tick", *pins])]
    for k, a in enumerate(trace):
        lines.append(",".join([str(k), *(str(a[p]) for p in pins)]))
    return "\n".join(lines) + "\n"


def write_csv(pins, outputs) -> str:
    """One row per tick; tick 0 is the output before any sample."""
    return write_stimulus(pins, outputs)


def vcd_id(k: int) -> str:
    chars = []
    k += 1
    while k:
        k, r = divmod(k - 1, 94)
        chars.append(chr(33 + r))
    return "".join(reversed(chars))


def write_vcd(pins, outputs) -> str:
    ids = [vcd_id(k) for k in range(len(pins))]
    lines = ["$timescale 1 ns $end"]
    lines += [f"$var wire 1 {i} {p} $end" for i, p in zip(ids, pins)]
    lines.append("$enddefinitions $end")
    prev = None
    for tick, out in enumerate(outputs):
        changes = [f"{out[p]}{i}" for i, p in zip(ids, pins) if prev is None or out[p] != prev[p]]
        if changes:
            lines.append(f"#{tick}")
            lines += changes
        prev = out
    return "\n".join(lines) + "\n"
