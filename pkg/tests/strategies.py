"""Hypothesis strategies for signals, schedules and generator functions."""

from fractions import Fraction

import hypothesis.strategies as st

from regasync.genfn import GeneratorFunction
from regasync.schedule import Schedule
from regasync.signal import canonicalize

times = st.builds(Fraction, st.integers(-20, 40), st.sampled_from([1, 2, 3, 4, 6]))


def bitvectors(width):
    return st.tuples(*[st.integers(0, 1)] * width)


@st.composite
def signals(draw, width=None, max_switches=5):
    width = width or draw(st.integers(1, 3))
    ts = sorted(draw(st.sets(times, max_size=max_switches)))
    return canonicalize(draw(bitvectors(width)), [(t, draw(bitvectors(width))) for t in ts])


@st.composite
def firesets(draw, n):
    return frozenset(draw(st.sets(st.integers(1, n), min_size=1)))


@st.composite
def schedules(draw, n=None, progressive=True):
    n = n or draw(st.integers(1, 3))
    ts = sorted(draw(st.sets(times, max_size=5)))
    prefix = [(t, draw(firesets(n))) for t in ts]
    anchor = (ts[-1] if ts else Fraction(0)) + draw(st.sampled_from([Fraction(1, 4), 1, 2]))
    period = draw(st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2)]))
    k = draw(st.integers(1, 3))
    offsets = sorted(draw(st.sets(st.integers(0, 5), min_size=k, max_size=k)))
    pattern = [(period * Fraction(o, 6), set(draw(firesets(n)))) for o in offsets]
    if progressive:
        for i in range(1, n + 1):
            if not any(i in fs for _, fs in pattern):
                pattern[draw(st.integers(0, len(pattern) - 1))][1].add(i)
    return Schedule(n, tuple(prefix), anchor, period, tuple(pattern))


@st.composite
def genfns(draw, n=None, m=None):
    n = n or draw(st.integers(1, 3))
    m = m or draw(st.integers(1, 2))
    table = [draw(bitvectors(n)) for _ in range(1 << (n + m))]
    return GeneratorFunction(n, m, tuple(table))
