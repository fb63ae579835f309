import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from regasync.dsl import (Workspace, format_pi, format_workspace, parse_schedule, parse_signal,
                          parse_workspace)
from regasync.errors import (DslSyntaxError, DslWidthMismatch, DuplicateName, UnknownVariable,
                             UnresolvedReference)
from regasync.regularity import check_generated
from regasync.schedule import format_schedule
from regasync.signal import format_signal

import oracles
import strategies as st_

SAMPLE = """\
# follower with one input pulse
genfn F { n=1 m=1 ; x1' = u1 }
signal u = init 0 ; 1:1 ; 5/2:0
sched r = sched n=1 prefix[1:{1}] tail anchor=2 period=1 [0:{1}]
"""


def test_three_entries():
    ws = parse_workspace(SAMPLE)
    assert len(ws) == 3
    assert ws.get("signal", "u").switches[1][0] == Fraction(5, 2)
    assert ws.get("sched", "r").tail_anchor == 2
    assert ws.get("genfn", "F")((0,), (1,)) == (1,)


def test_systems_and_pis():
    text = SAMPLE + """\
signal up = init 0 ; 1:1
system f { (init 1) -> { up, (init 1) } ;
           (init 0) -> { (init 0) } }
pi p { (0, (init 1)) -> { r } }
"""
    ws = parse_workspace(text)
    f = ws.get("system", "f")
    assert len(f(parse_signal("init 1"))) == 2
    assert ws.get("pi", "p")[((0,), parse_signal("init 1"))] == {ws.get("sched", "r")}


@pytest.mark.parametrize("text,error,line,column", [
    ("signal a = init 0\nsignal a = init 1\n", DuplicateName, 2, 8),
    ("system f { u -> { (init 0) } }\n", UnresolvedReference, 1, 12),
    ("signal a = init 0 ; 1:11\n", DslWidthMismatch, 1, 23),
    ("genfn G { n=1 m=1 ; x1' = y1 }\n", UnknownVariable, 1, 27),
    ("signal a = init 0 ; 2:1 ; 1:0\n", DslSyntaxError, 1, 27),
    ("thing x = 1\n", DslSyntaxError, 1, 1),
    ("signal a = init 0\nsystem f { a -> { a } ; (init 00) -> { (init 0) } }\n",
     DslWidthMismatch, 2, 25),
])
def test_errors_carry_location(text, error, line, column):
    with pytest.raises(error) as exc:
        parse_workspace(text)
    assert (exc.value.line, exc.value.column) == (line, column)


def test_missing_reference_lookup():
    with pytest.raises(UnresolvedReference):
        Workspace().get("genfn", "nope")


def random_workspace(rng):
    ws = Workspace()
    for k in range(rng.randint(1, 3)):
        n, m = rng.randint(1, 2), rng.randint(1, 2)
        F, f = oracles.random_generated_system(rng, n, m)
        ws.genfns[f"F{k}"] = F
        ws.systems[f"f{k}"] = f
        ws.pis[f"p{k}"] = check_generated(f, F).computation
        u = next(iter(f.domain))
        ws.signals[f"u{k}"] = u
        ws.schedules[f"r{k}"] = oracles.random_schedule(rng, n)
    return ws


def test_workspace_round_trip_random():
    rng = random.Random(21)
    for _ in range(20):
        ws = random_workspace(rng)
        text = format_workspace(ws)
        again = parse_workspace(text)
        assert again == ws
        assert format_workspace(again) == text


def test_printed_pi_reparses():
    rng = random.Random(22)
    F, f = oracles.random_generated_system(rng, 2, 1)
    pi = check_generated(f, F).computation
    assert parse_workspace(f"pi p {format_pi(pi)}\n").pis["p"] == pi


@settings(max_examples=60, deadline=None)
@given(st_.signals(2))
def test_signal_literal_round_trip(x):
    assert parse_signal(format_signal(x)) == x


@settings(max_examples=60, deadline=None)
@given(st_.schedules(2))
def test_schedule_literal_round_trip(r):
    assert parse_schedule(format_schedule(r)) == r
