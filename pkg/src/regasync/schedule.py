"""Update schedules: which coordinates fire at which instants.

A schedule is a finite prefix of ``(time, fireset)`` events followed by a
periodic tail: the pattern ``(offset, fireset)`` repeats at
``tail_anchor + j * tail_period`` for every ``j >= 0``.  Firesets are
frozensets of 1-based coordinate indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import NotProgressive, WidthMismatch
from .signal import as_time, fmt_time


def _fireset(fs, width):
    fs = frozenset(int(i) for i in fs)
    if not fs:
        raise ValueError("empty fireset")
    if not all(1 <= i <= width for i in fs):
        raise WidthMismatch(f"fireset {sorted(fs)} outside 1..{width}")
    return fs


@dataclass(frozen=True)
class Schedule:
    width: int
    prefix: tuple
    tail_anchor: Fraction
    tail_period: Fraction
    tail_pattern: tuple

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("schedule width must be positive")
        prefix = tuple((as_time(t), _fireset(fs, self.width)) for t, fs in self.prefix)
        pattern = tuple((as_time(o), _fireset(fs, self.width)) for o, fs in self.tail_pattern)
        anchor, period = as_time(self.tail_anchor), as_time(self.tail_period)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail_pattern", pattern)
        object.__setattr__(self, "tail_anchor", anchor)
        object.__setattr__(self, "tail_period", period)
        if period <= 0:
            raise ValueError("tail period must be positive")
        if not pattern:
            raise ValueError("tail pattern must be nonempty")
        for (a, _), (b, _) in zip(prefix, prefix[1:]):
            if b <= a:
                raise ValueError(f"prefix times not increasing at {b}")
        for (a, _), (b, _) in zip(pattern, pattern[1:]):
            if b <= a:
                raise ValueError(f"tail offsets not increasing at {b}")
        if not 0 <= pattern[0][0] or not pattern[-1][0] < period:
            raise ValueError("tail offsets must lie in [0, period)")
        if prefix and not anchor > prefix[-1][0]:
            raise ValueError("tail anchor must follow the last prefix event")

    @classmethod
    def periodic(cls, width, anchor=0, period=1, fireset=None) -> "Schedule":
        """All coordinates (or ``fireset``) fire at anchor, anchor+period, ..."""
        fs = range(1, width + 1) if fireset is None else fireset
        return cls(width, (), anchor, period, ((0, fs),))

    def events(self) -> Iterator[tuple]:
        """All events in increasing time order (infinite)."""
        yield from self.prefix
        for j in itertools.count():
            base = self.tail_anchor + j * self.tail_period
            for off, fs in self.tail_pattern:
                yield base + off, fs

    def events_up_to(self, horizon) -> list:
        horizon = as_time(horizon)
        return list(itertools.takewhile(lambda e: e[0] <= horizon, self.events()))

    def is_progressive(self) -> bool:
        fired = frozenset().union(*(fs for _, fs in self.tail_pattern))
        return fired == frozenset(range(1, self.width + 1))

    def __str__(self):
        return format_schedule(self)


def is_progressive(r: Schedule) -> bool:
    return r.is_progressive()


def events_up_to(r: Schedule, horizon) -> list:
    return r.events_up_to(horizon)


def rational_lcm(a: Fraction, b: Fraction) -> Fraction:
    """Least positive rational that is an integer multiple of both."""
    return Fraction(math.lcm(a.numerator, b.numerator),
                    math.gcd(a.denominator, b.denominator))


def pair_schedules(r: Schedule, s: Schedule) -> Schedule:
    """Run ``r`` on coordinates 1..n and ``s`` on n+1..n+n' of one schedule."""
    for sched in (r, s):
        if not sched.is_progressive():
            raise NotProgressive(f"schedule {sched} is not progressive")
    anchor = max(r.tail_anchor, s.tail_anchor)
    period = rational_lcm(r.tail_period, s.tail_period)
    stop = anchor + period
    merged: dict = {}
    for sched, shift in ((r, 0), (s, r.width)):
        for t, fs in sched.events():
            if t >= stop:
                break
            merged.setdefault(t, set()).update(i + shift for i in fs)
    prefix = [(t, merged[t]) for t in sorted(merged) if t < anchor]
    pattern = [(t - anchor, merged[t]) for t in sorted(merged) if t >= anchor]
    return Schedule(r.width + s.width, tuple(prefix), anchor, period, tuple(pattern))


def _fmt_fireset(fs) -> str:
    return "{" + ",".join(str(i) for i in sorted(fs)) + "}"


def format_schedule(r: Schedule) -> str:
    prefix = "; ".join(f"{fmt_time(t)}:{_fmt_fireset(fs)}" for t, fs in r.prefix)
    tail = "; ".join(f"{fmt_time(o)}:{_fmt_fireset(fs)}" for o, fs in r.tail_pattern)
    return (f"sched n={r.width} prefix[{prefix}] tail anchor={fmt_time(r.tail_anchor)} "
            f"period={fmt_time(r.tail_period)} [{tail}]")
