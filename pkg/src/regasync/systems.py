"""Explicit finite asynchronous systems and their combinators.

A system maps each admissible input signal to a nonempty frozenset of state
signals.  Initial-state functions are dicts ``u -> frozenset of bit vectors``;
computation functions are dicts ``(mu, u) -> frozenset of schedules``.

The ``initial_*`` and ``computation_*`` builders follow the closed formulas
for each combinator, computed from the operands; they are deliberately not
recomputed from the combined system so the two can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import (ComposabilityError, EmptyCommonInput, EmptyIntersection, WidthMismatch)
from .genfn import GeneratorFunction
from .schedule import pair_schedules
from .signal import Signal, complement, negate, pair
from .solver import DEFAULT_MAX_EVENTS, solve


@dataclass(frozen=True, eq=False)
class ExplicitSystem:
    input_width: int
    state_width: int
    entries: Mapping

    def __post_init__(self):
        entries = {u: frozenset(xs) for u, xs in dict(self.entries).items()}
        if not entries:
            raise ValueError("a system needs at least one admissible input")
        for u, xs in entries.items():
            if u.width != self.input_width:
                raise WidthMismatch(f"input {u} has width {u.width}, expected {self.input_width}")
            if not xs:
                raise ValueError(f"input {u} has an empty set of states")
            for x in xs:
                if x.width != self.state_width:
                    raise WidthMismatch(f"state {x} has width {x.width}, "
                                        f"expected {self.state_width}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, entries: Mapping) -> "ExplicitSystem":
        """Infer widths from the first entry."""
        u, xs = next(iter(entries.items()))
        return cls(u.width, next(iter(xs)).width, entries)

    @property
    def domain(self):
        return self.entries.keys()

    def __call__(self, u):
        return self.entries[u]

    def __eq__(self, other):
        if not isinstance(other, ExplicitSystem):
            return NotImplemented
        return (self.input_width == other.input_width
                and self.state_width == other.state_width
                and self.entries == other.entries)

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()


def _same_widths(f, g):
    if f.input_width != g.input_width or f.state_width != g.state_width:
        raise WidthMismatch(f"systems have widths (m={f.input_width}, n={f.state_width}) "
                            f"and (m={g.input_width}, n={g.state_width})")


def initial_state_function(f: ExplicitSystem) -> dict:
    return {u: frozenset(x.initial for x in xs) for u, xs in f.items()}


def computation_domain(f: ExplicitSystem) -> frozenset:
    """The set W_f of (initial value, input) pairs."""
    return frozenset((x.initial, u) for u, xs in f.items() for x in xs)


def is_subsystem(f: ExplicitSystem, g: ExplicitSystem) -> bool:
    _same_widths(f, g)
    return all(u in g.entries and xs <= g(u) for u, xs in f.items())


# -- combinators --------------------------------------------------------------

def dual_system(f: ExplicitSystem) -> ExplicitSystem:
    return ExplicitSystem(f.input_width, f.state_width,
                          {complement(u): {complement(x) for x in xs} for u, xs in f.items()})


def cartesian_product(f: ExplicitSystem, f2: ExplicitSystem) -> ExplicitSystem:
    entries = {}
    for u, xs in f.items():
        for u2, xs2 in f2.items():
            entries[pair(u, u2)] = {pair(x, x2) for x in xs for x2 in xs2}
    return ExplicitSystem(f.input_width + f2.input_width, f.state_width + f2.state_width,
                          entries)


def _common_inputs(f, f1):
    if f.input_width != f1.input_width:
        raise WidthMismatch(f"input widths differ: {f.input_width} vs {f1.input_width}")
    common = [u for u in f.domain if u in f1.entries]
    if not common:
        raise EmptyCommonInput("the systems have no admissible input in common")
    return common


def parallel_connection(f: ExplicitSystem, f1: ExplicitSystem) -> ExplicitSystem:
    entries = {u: {pair(x, x1) for x in f(u) for x1 in f1(u)} for u in _common_inputs(f, f1)}
    return ExplicitSystem(f.input_width, f.state_width + f1.state_width, entries)


def _check_composable(h, f):
    if h.input_width != f.state_width:
        raise WidthMismatch(f"second system reads {h.input_width}-signals, first "
                            f"system produces {f.state_width}-signals")
    missing = []
    for xs in f.entries.values():
        for x in xs:
            if x not in h.entries and x not in missing:
                missing.append(x)
    if missing:
        raise ComposabilityError(missing)


def serial_compose(h: ExplicitSystem, f: ExplicitSystem) -> ExplicitSystem:
    _check_composable(h, f)
    entries = {u: frozenset().union(*(h(x) for x in xs)) for u, xs in f.items()}
    return ExplicitSystem(f.input_width, h.state_width, entries)


def serial_star_system(h: ExplicitSystem, f: ExplicitSystem) -> ExplicitSystem:
    _check_composable(h, f)
    entries = {u: {pair(x, y) for x in xs for y in h(x)} for u, xs in f.items()}
    return ExplicitSystem(f.input_width, f.state_width + h.state_width, entries)


def intersection(f: ExplicitSystem, g: ExplicitSystem) -> ExplicitSystem:
    _same_widths(f, g)
    entries = {}
    for u, xs in f.items():
        if u in g.entries and xs & g(u):
            entries[u] = xs & g(u)
    if not entries:
        raise EmptyIntersection("no input has a state common to both systems")
    return ExplicitSystem(f.input_width, f.state_width, entries)


def union(f: ExplicitSystem, g: ExplicitSystem) -> ExplicitSystem:
    _same_widths(f, g)
    entries = dict(f.entries)
    for u, xs in g.items():
        entries[u] = entries[u] | xs if u in entries else xs
    return ExplicitSystem(f.input_width, f.state_width, entries)


# -- initial-state functions by formula ----------------------------------------

def initial_dual(f):
    i_f = initial_state_function(f)
    return {complement(u): frozenset(negate(mu) for mu in mus) for u, mus in i_f.items()}


def initial_product(f, f2):
    i_f, i_f2 = initial_state_function(f), initial_state_function(f2)
    return {pair(u, u2): frozenset(a + b for a in i_f[u] for b in i_f2[u2])
            for u in i_f for u2 in i_f2}


def initial_parallel(f, f1):
    i_f, i_f1 = initial_state_function(f), initial_state_function(f1)
    return {u: frozenset(a + b for a in i_f[u] for b in i_f1[u])
            for u in _common_inputs(f, f1)}


def initial_serial_star(h, f):
    _check_composable(h, f)
    i_h = initial_state_function(h)
    out = {}
    for u, xs in f.items():
        out[u] = frozenset(x.initial + lam for x in xs for lam in i_h[x])
    return out


def initial_intersection(f, g):
    W = intersection(f, g).domain
    i_f, i_g = initial_state_function(f), initial_state_function(g)
    return {u: i_f[u] & i_g[u] for u in W}


def initial_union(f, g):
    _same_widths(f, g)
    i_f, i_g = initial_state_function(f), initial_state_function(g)
    out = dict(i_f)
    for u, mus in i_g.items():
        out[u] = out[u] | mus if u in out else mus
    return out


_INITIAL = {
    "dual": initial_dual,
    "product": initial_product,
    "parallel": initial_parallel,
    "serial_star": initial_serial_star,
    "intersection": initial_intersection,
    "union": initial_union,
}


def derived_initial(kind: str, *operands) -> dict:
    try:
        builder = _INITIAL[kind]
    except KeyError:
        raise ValueError(f"unknown combinator {kind!r}") from None
    return builder(*operands)


# -- computation functions by formula ------------------------------------------

def computation_dual(f, pi_f):
    return {(negate(mu), complement(u)): pi_f[(mu, u)] for mu, u in computation_domain(f)}


def computation_product(f, f2, pi_f, pi_f2):
    out = {}
    for mu, u in computation_domain(f):
        for mu2, u2 in computation_domain(f2):
            out[(mu + mu2, pair(u, u2))] = frozenset(
                pair_schedules(r, r2) for r in pi_f[(mu, u)] for r2 in pi_f2[(mu2, u2)])
    return out


def computation_parallel(f, f1, pi_f, pi_f1):
    common = set(_common_inputs(f, f1))
    out = {}
    for mu, u in computation_domain(f):
        if u not in common:
            continue
        for x1 in f1(u):
            out[(mu + x1.initial, u)] = frozenset(
                pair_schedules(r, r1) for r in pi_f[(mu, u)] for r1 in pi_f1[(x1.initial, u)])
    return out


def computation_serial_star(h, f, pi_f, pi_h):
    _check_composable(h, f)
    out = {}
    for u, xs in f.items():
        for x in xs:
            for y in h(x):
                mu, lam = x.initial, y.initial
                if (mu + lam, u) in out:
                    continue
                # second stage schedules from every x in f(u) with the same initial value
                varpis = set()
                for x2 in xs:
                    if x2.initial == mu and (lam, x2) in pi_h:
                        varpis |= pi_h[(lam, x2)]
                out[(mu + lam, u)] = frozenset(
                    pair_schedules(r, w) for r in pi_f[(mu, u)] for w in varpis)
    return out


def computation_intersection(f, g, pi_f, pi_g, F: GeneratorFunction,
                             max_events=DEFAULT_MAX_EVENTS):
    both = intersection(f, g)
    out = {}
    for u, xs in both.items():
        for x in xs:
            key = (x.initial, u)
            if key in out:
                continue
            mu = x.initial
            reached = {solve(F, mu, u, r2, max_events) for r2 in pi_g[key]}
            out[key] = frozenset(r for r in pi_f[key]
                                 if solve(F, mu, u, r, max_events) in reached)
    return out


def computation_union(f, g, pi_f, pi_g):
    _same_widths(f, g)
    W_f, W_g = computation_domain(f), computation_domain(g)
    out = {}
    for key in W_f | W_g:
        if key in W_f and key in W_g:
            out[key] = pi_f[key] | pi_g[key]
        elif key in W_f:
            out[key] = pi_f[key]
        else:
            out[key] = pi_g[key]
    return out


_COMPUTATION = {
    "dual": computation_dual,
    "product": computation_product,
    "parallel": computation_parallel,
    "serial_star": computation_serial_star,
    "intersection": computation_intersection,
    "union": computation_union,
}


def derived_computation(kind: str, *operands, **kwargs) -> dict:
    """Computation function of a combined system from its operands.

    Operands are the systems followed by their computation functions; the
    intersection additionally needs the shared generator function.
    """
    try:
        builder = _COMPUTATION[kind]
    except KeyError:
        raise ValueError(f"unknown combinator {kind!r}") from None
    return builder(*operands, **kwargs)
