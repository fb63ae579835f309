"""CSV and VCD export/import of state trajectories.

CSV: header ``time,x1,...,xn``; the first row carries time ``-inf`` and the
initial value, then one row per switch.  Times are written as exact
rationals (``3/2``).

VCD needs integer timestamps.  Times are mapped to ticks by
``tick = (t - origin) * L`` with ``L`` the least common denominator of all
switch times and ``origin`` an integer below every switch time; both numbers
are recorded in a ``$comment`` so the import is exact.  The initial value is
dumped at tick 0.
"""

from __future__ import annotations

import csv
import io
import math
import re
from fractions import Fraction

from .signal import Signal, bits, canonicalize

_SCALE_RE = re.compile(r"regasync origin=(-?\d+) denominator=(\d+)")


def write_csv(x: Signal, stream, names=None) -> None:
    names = names or [f"x{i}" for i in range(1, x.width + 1)]
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["time", *names])
    w.writerow(["-inf", *x.initial])
    for t, v in x.switches:
        w.writerow([str(t), *v])


def read_csv(stream) -> Signal:
    rows = [row for row in csv.reader(stream) if row]
    if len(rows) < 2 or rows[0][0] != "time" or rows[1][0] != "-inf":
        raise ValueError("not a trajectory CSV: expected a header and a -inf row")
    initial = bits(rows[1][1:])
    return canonicalize(initial, [(Fraction(r[0]), bits(r[1:])) for r in rows[2:]])


def csv_text(x: Signal) -> str:
    buf = io.StringIO()
    write_csv(x, buf)
    return buf.getvalue()


def vcd_scale(x: Signal):
    """(origin, denominator) used to turn switch times into integer ticks."""
    denom = math.lcm(1, *(t.denominator for t in x.times))
    if not x.times or x.times[0] > 0:
        origin = 0
    else:
        origin = math.floor(x.times[0]) - 1
    return origin, denom


def _var_id(i: int) -> str:
    chars = [chr(c) for c in range(33, 127)]
    out = ""
    i += 1
    while i:
        i, r = divmod(i - 1, len(chars))
        out = chars[r] + out
    return out


def write_vcd(x: Signal, stream, names=None, module="regasync") -> None:
    names = names or [f"x{i}" for i in range(1, x.width + 1)]
    origin, denom = vcd_scale(x)
    ids = [_var_id(i) for i in range(x.width)]
    out = [
        "$comment",
        f"  regasync origin={origin} denominator={denom}",
        f"  time = {origin} + tick/{denom}",
        "$end",
        "$timescale 1 ns $end",
        f"$scope module {module} $end",
    ]
    out += [f"$var wire 1 {vid} {name} $end" for vid, name in zip(ids, names)]
    out += ["$upscope $end", "$enddefinitions $end", "#0", "$dumpvars"]
    out += [f"{b}{vid}" for b, vid in zip(x.initial, ids)]
    out.append("$end")
    prev = x.initial
    for t, v in x.switches:
        tick = (t - origin) * denom
        assert tick.denominator == 1 and tick > 0
        out.append(f"#{tick.numerator}")
        out += [f"{b}{vid}" for b, p, vid in zip(v, prev, ids) if b != p]
        prev = v
    stream.write("\n".join(out) + "\n")


def vcd_text(x: Signal) -> str:
    buf = io.StringIO()
    write_vcd(x, buf)
    return buf.getvalue()


def read_vcd(stream) -> Signal:
    """Read a VCD written by :func:`write_vcd` (1-bit wires, one scope)."""
    text = stream.read()
    m = _SCALE_RE.search(text)
    if m is None:
        raise ValueError("VCD lacks the regasync origin/denominator comment")
    origin, denom = int(m.group(1)), int(m.group(2))
    header, _, body = text.partition("$enddefinitions")
    order = re.findall(r"\$var\s+\w+\s+1\s+(\S+)\s+\S+\s+\$end", header)
    index = {vid: k for k, vid in enumerate(order)}
    current = [None] * len(order)
    tick = None
    initial = None
    raw = []

    def flush():
        if tick == 0:
            return
        raw.append((origin + Fraction(tick, denom), tuple(current)))

    for tok in body.split()[1:]:  # skip the "$end" closing $enddefinitions
        if tok.startswith("#"):
            if tick is not None and tick > 0:
                flush()
            elif tick == 0:
                initial = tuple(current)
            tick = int(tok[1:])
        elif tok[0] in "01" and tok[1:] in index:
            current[index[tok[1:]]] = int(tok[0])
    if tick == 0:
        initial = tuple(current)
    elif tick is not None:
        flush()
    if initial is None or None in initial:
        raise ValueError("VCD has no complete initial dump at #0")
    return canonicalize(initial, raw)
