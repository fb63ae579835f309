"""Binary n-signals: eventually constant, right-continuous step functions.

A bit vector is a plain tuple of 0/1 ints; times are exact ``Fraction`` values.
A signal holds its value ``initial`` on (-inf, t0) and switches to
``switches[k][1]`` on [t_k, t_{k+1}).  Only value changes are stored, so two
signals are equal as functions iff they are equal as objects.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadRange, NonIncreasingTimes, WidthMismatch

BitVector = tuple  # tuple[int, ...] of 0/1


def bits(value) -> BitVector:
    """Coerce ``"01"``, ``[0, 1]`` or an existing tuple to a bit vector."""
    if isinstance(value, str):
        if not value or any(c not in "01" for c in value):
            raise ValueError(f"not a bit string: {value!r}")
        return tuple(int(c) for c in value)
    out = tuple(int(b) for b in value)
    if not out or any(b not in (0, 1) for b in out):
        raise ValueError(f"not a bit vector: {value!r}")
    return out


def bitstr(v: BitVector) -> str:
    return "".join(map(str, v))


def negate(v: BitVector) -> BitVector:
    return tuple(1 - b for b in v)


def as_time(t) -> Fraction:
    if isinstance(t, Fraction):
        return t
    if isinstance(t, float):
        raise TypeError("float times are not accepted; use Fraction or a 'p/q' string")
    return Fraction(t)


def fmt_time(t: Fraction) -> str:
    return str(t)


@dataclass(frozen=True)
class Signal:
    initial: BitVector
    switches: tuple = ()
    _times: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        initial = bits(self.initial)
        object.__setattr__(self, "initial", initial)
        sw = tuple((as_time(t), bits(v)) for t, v in self.switches)
        object.__setattr__(self, "switches", sw)
        prev_t, prev_v = None, initial
        for t, v in sw:
            if len(v) != len(initial):
                raise WidthMismatch(f"switch value {bitstr(v)} has width {len(v)}, "
                                    f"expected {len(initial)}")
            if prev_t is not None and t <= prev_t:
                raise NonIncreasingTimes(f"switch time {t} does not exceed {prev_t}")
            if v == prev_v:
                raise ValueError(f"non-canonical signal: switch at {t} repeats {bitstr(v)}")
            prev_t, prev_v = t, v
        object.__setattr__(self, "_times", tuple(t for t, _ in sw))

    @classmethod
    def constant(cls, value) -> "Signal":
        return cls(bits(value))

    @property
    def width(self) -> int:
        return len(self.initial)

    @property
    def times(self) -> tuple:
        return self._times

    @property
    def last_time(self):
        return self._times[-1] if self._times else None

    def value_at(self, t) -> BitVector:
        k = bisect_right(self._times, as_time(t))
        return self.initial if k == 0 else self.switches[k - 1][1]

    def left_limit(self, t) -> BitVector:
        k = bisect_left(self._times, as_time(t))
        return self.initial if k == 0 else self.switches[k - 1][1]

    def initial_value(self) -> BitVector:
        return self.initial

    def final_value(self) -> BitVector:
        return self.switches[-1][1] if self.switches else self.initial

    def __str__(self):
        return format_signal(self)


def canonicalize(initial, raw: Iterable) -> Signal:
    """Build a signal from ``(time, value)`` pairs, dropping non-changes."""
    initial = bits(initial)
    out = []
    prev_t, cur = None, initial
    for t, v in raw:
        t, v = as_time(t), bits(v)
        if prev_t is not None and t <= prev_t:
            raise NonIncreasingTimes(f"time {t} does not exceed {prev_t}")
        prev_t = t
        if v != cur:
            out.append((t, v))
            cur = v
    return Signal(initial, tuple(out))


def value_at(x: Signal, t) -> BitVector:
    return x.value_at(t)


def left_limit(x: Signal, t) -> BitVector:
    return x.left_limit(t)


def initial_value(x: Signal) -> BitVector:
    return x.initial


def final_value(x: Signal) -> BitVector:
    return x.final_value()


def pair(x: Signal, u: Signal) -> Signal:
    grid = sorted(set(x.times) | set(u.times))
    return canonicalize(x.initial + u.initial,
                        [(t, x.value_at(t) + u.value_at(t)) for t in grid])


def pair_all(signals: Sequence[Signal]) -> Signal:
    out = signals[0]
    for s in signals[1:]:
        out = pair(out, s)
    return out


def project(z: Signal, lo: int, hi: int) -> Signal:
    """Coordinates ``lo..hi`` (1-based, inclusive) of ``z``."""
    if not 1 <= lo <= hi <= z.width:
        raise BadRange(f"cannot project coordinates {lo}..{hi} of a {z.width}-signal")
    return canonicalize(z.initial[lo - 1:hi], [(t, v[lo - 1:hi]) for t, v in z.switches])


def complement(x: Signal) -> Signal:
    return Signal(negate(x.initial), tuple((t, negate(v)) for t, v in x.switches))


def format_signal(x: Signal) -> str:
    parts = [f"init {bitstr(x.initial)}"]
    parts += [f"{fmt_time(t)}:{bitstr(v)}" for t, v in x.switches]
    return " ; ".join(parts)
