"""Event-driven solution of the asynchronous evolution equation and membership.

At every fire time ``t`` of the schedule, each fired coordinate ``i`` takes
``F_i(x(t-0), u(t-0))``; the others keep ``x_i(t-0)``.  Both the state and
the input are read through left limits, so an input switch at the same
instant as an update is not seen by that update.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import EventBudgetExceeded, NonStabilizing, NotProgressive, WidthMismatch
from .genfn import GeneratorFunction
from .schedule import Schedule
from .signal import BitVector, Signal, bits, bitstr, canonicalize

DEFAULT_MAX_EVENTS = 10_000


@dataclass(frozen=True)
class OscillationReport:
    entry_time: Fraction
    cycle: tuple

    def __str__(self):
        return f"t={self.entry_time}: " + " -> ".join(bitstr(s) for s in self.cycle)


@dataclass(frozen=True)
class Conflict:
    reason: str
    time: Optional[Fraction] = None
    coordinate: Optional[int] = None
    required: Optional[int] = None
    observed: Optional[int] = None

    def __str__(self):
        if self.time is None:
            return self.reason
        return (f"{self.reason} at t={self.time}, coordinate x{self.coordinate}: "
                f"generator gives {self.required}, trajectory has {self.observed}")


FIXED_POINT_CONFLICT = "final value not a fixed point"


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    witness: Optional[Schedule] = None
    conflict: Optional[Conflict] = None


def _update(F, state, inp, fireset):
    target = F.eval(state, inp)
    if all(state[i - 1] == target[i - 1] for i in fireset):
        return state
    return tuple(target[i] if (i + 1) in fireset else state[i] for i in range(len(state)))


def solve(F: GeneratorFunction, mu, u: Signal, r: Schedule,
          max_events: int = DEFAULT_MAX_EVENTS) -> Signal:
    """Trajectory from initial state ``mu`` under input ``u`` and schedule ``r``.

    Raises :class:`NonStabilizing` when the run settles into a cycle of more
    than one state, and :class:`EventBudgetExceeded` when ``max_events`` events
    are consumed before a verdict.
    """
    mu = bits(mu)
    n = F.state_width
    if len(mu) != n or r.width != n or u.width != F.input_width:
        raise WidthMismatch(f"generator is B^{n} x B^{F.input_width} -> B^{n}; got "
                            f"mu of width {len(mu)}, input of width {u.width}, "
                            f"schedule of width {r.width}")
    if not r.is_progressive():
        raise NotProgressive(f"schedule {r} is not progressive")

    anchor, period = r.tail_anchor, r.tail_period
    # first tail boundary from which every update reads the final input
    t_u = u.last_time
    j0 = 0 if t_u is None or t_u < anchor else math.floor((t_u - anchor) / period) + 1
    settle = anchor + j0 * period

    state = mu
    out = []
    count = 0

    def step(t, fireset, inp):
        nonlocal state, count
        count += 1
        if count > max_events:
            raise EventBudgetExceeded(f"no verdict within {max_events} events")
        new = _update(F, state, inp, fireset)
        if new != state:
            state = new
            out.append((t, new))

    for t, fs in r.events():
        if t >= settle:
            break
        step(t, fs, u.left_limit(t))

    nu = u.final_value()
    seen = {}
    traces = []
    boundary = settle
    while state not in seen:
        seen[state] = len(traces)
        trace = [state]
        changed = False
        for off, fs in r.tail_pattern:
            before = state
            step(boundary + off, fs, nu)
            if state != before:
                changed = True
                trace.append(state)
        if not changed:
            return canonicalize(mu, out)
        traces.append((boundary, trace))
        boundary += period

    first = seen[state]
    cycle = [s for _, tr in traces[first:] for s in tr]
    cycle = [s for k, s in enumerate(cycle) if k == 0 or s != cycle[k - 1]]
    while len(cycle) > 1 and cycle[-1] == cycle[0]:
        cycle.pop()
    raise NonStabilizing(OscillationReport(traces[first][0], tuple(cycle)))


def membership(F: GeneratorFunction, x: Signal, u: Signal) -> MembershipResult:
    """Decide whether some progressive schedule drives ``F`` from x(-inf+0) along ``x``."""
    if x.width != F.state_width or u.width != F.input_width:
        raise WidthMismatch(f"generator is B^{F.state_width} x B^{F.input_width}; got "
                            f"state width {x.width}, input width {u.width}")
    prefix = []
    before = x.initial
    for t, after in x.switches:
        target = F.eval(before, u.left_limit(t))
        changed = [i for i in range(len(after)) if after[i] != before[i]]
        for i in changed:
            if target[i] != after[i]:
                return MembershipResult(False, conflict=Conflict(
                    "switch not produced by the generator", t, i + 1, target[i], after[i]))
        prefix.append((t, frozenset(i + 1 for i in changed)))
        before = after
    xi, nu = x.final_value(), u.final_value()
    if F.eval(xi, nu) != xi:
        return MembershipResult(False, conflict=Conflict(FIXED_POINT_CONFLICT))
    last = max((t for t in (x.last_time, u.last_time) if t is not None), default=None)
    anchor = Fraction(0) if last is None else math.floor(last) + 1
    witness = Schedule(F.state_width, tuple(prefix), anchor, 1,
                       ((0, range(1, F.state_width + 1)),))
    return MembershipResult(True, witness=witness)
