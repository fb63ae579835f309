import random

import pytest

from regasync.errors import (ComposabilityError, EmptyCommonInput, EmptyIntersection,
                             WidthMismatch)
from regasync.regularity import check_generated
from regasync.schedule import Schedule, pair_schedules
from regasync.signal import Signal, complement, pair, project
from regasync.solver import solve
from regasync.systems import (ExplicitSystem, cartesian_product, computation_domain,
                              derived_computation, derived_initial, dual_system,
                              initial_state_function, intersection, is_subsystem,
                              parallel_connection, serial_compose, serial_star_system, union)
import oracles

C0, C1 = Signal.constant("0"), Signal.constant("1")
UP = Signal((0,), [(1, (1,))])
DOWN = Signal((1,), [(2, (0,))])


def system(entries):
    return ExplicitSystem.of(entries)


def test_initial_state_function():
    f = system({C0: {C0, C1}})
    assert initial_state_function(f) == {C0: {(0,), (1,)}}
    assert initial_state_function(system({C0: {C0, UP}})) == {C0: {(0,)}}


def test_is_subsystem():
    g = system({C0: {C0, UP}, C1: {C1}})
    assert is_subsystem(g, g)
    assert is_subsystem(system({C0: {UP}}), g)
    assert not is_subsystem(system({DOWN: {C0}}), g)
    with pytest.raises(WidthMismatch):
        is_subsystem(system({Signal.constant("00"): {C0}}), g)


def test_dual_system():
    f = system({C0: {C0}, UP: {UP, C1}})
    assert dual_system(system({C0: {C0}})) == system({C1: {C1}})
    assert dual_system(dual_system(f)) == f
    for u, xs in f.items():
        assert len(dual_system(f)(complement(u))) == len(xs)


def test_cartesian_product():
    f = system({C0: {C0, UP}})
    f2 = system({C1: {C1, DOWN, C0}})
    p = cartesian_product(f, f2)
    assert len(p(pair(C0, C1))) == 6
    single = system({C1: {C0}})
    widened = cartesian_product(f, single)
    assert {project(x, 1, 1) for x in widened(pair(C0, C1))} == f(C0)
    assert initial_state_function(p) == derived_initial("product", f, f2)


def test_parallel_connection():
    f = system({C0: {C0, UP}, C1: {C1}})
    assert parallel_connection(f, f)(C0) == {pair(a, b) for a in f(C0) for b in f(C0)}
    with pytest.raises(EmptyCommonInput):
        parallel_connection(system({C0: {C0}}), system({C1: {C1}}))
    f1 = system({C0: {C1}, DOWN: {C0}})
    assert initial_state_function(parallel_connection(f, f1)) == derived_initial("parallel", f, f1)


def test_serial_connections():
    f = system({C0: {C0, UP}})
    h = system({C0: {C1}, UP: {C0, DOWN}})
    assert serial_compose(h, system({C0: {C0}})) == system({C0: {C1}})
    assert serial_compose(h, f)(C0) == {C1, C0, DOWN}
    star = serial_star_system(h, f)
    assert len(star(C0)) == 3
    assert {project(z, 2, 2) for z in star(C0)} == serial_compose(h, f)(C0)
    assert initial_state_function(star) == derived_initial("serial_star", h, f)
    with pytest.raises(ComposabilityError) as exc:
        serial_compose(system({C0: {C0}}), system({C0: {C1}}))
    assert exc.value.missing == (C1,)


def test_intersection():
    f = system({C0: {C0, UP}, C1: {C1}})
    assert intersection(f, f) == f
    with pytest.raises(EmptyIntersection):
        intersection(system({C0: {C0}}), system({C0: {UP}}))
    with pytest.raises(EmptyIntersection):
        derived_initial("intersection", system({C0: {C0}}), system({C0: {UP}}))
    # the formula can list initial values that no common state has
    g = system({C0: {C0, Signal((0,), [(5, (1,))])}})
    h = system({C0: {C0, UP}})
    assert derived_initial("intersection", g, h) == {C0: {(0,)}}
    assert initial_state_function(intersection(system({C0: {C0, UP}}), system({C0: {C0, C1}})))


def test_union():
    f = system({C0: {C0}, C1: {C1}})
    g = system({C1: {UP}, DOWN: {C0}})
    assert union(f, f) == f
    fg = union(f, g)
    assert fg(C0) == {C0} and fg(C1) == {C1, UP} and fg(DOWN) == {C0}
    assert computation_domain(fg) == computation_domain(f) | computation_domain(g)
    assert derived_initial("union", f, g)[C1] == {(1,), (0,)}


def test_derived_computation_examples():
    F = oracles.rule_to_genfn({((0,), (0,)): (0,), ((0,), (1,)): (1,),
                               ((1,), (0,)): (0,), ((1,), (1,)): (1,)}, 1, 1)
    f = system({C1: {UP, C1}, C0: {C0}})
    pi = check_generated(f, F).computation
    dual_pi = derived_computation("dual", f, pi)
    for (mu, u), scheds in pi.items():
        assert dual_pi[(tuple(1 - b for b in mu), complement(u))] is scheds
    prod = derived_computation("product", f, f, pi, pi)
    for (mu, u), scheds in pi.items():
        for (mu2, u2), scheds2 in pi.items():
            assert len(prod[(mu + mu2, pair(u, u2))]) == len(
                {pair_schedules(a, b) for a in scheds for b in scheds2})
    assert derived_computation("intersection", f, f, pi, pi, F) == pi


def test_subsystem_transitivity_random():
    rng = random.Random(3)
    for _ in range(40):
        F, h = oracles.random_generated_system(rng, 2, 1)
        g = system({u: set(list(xs)[:max(1, len(xs) - 1)]) for u, xs in list(h.items())[:2]})
        f = system({u: set(list(xs)[:1]) for u, xs in list(g.items())[:1]})
        assert is_subsystem(f, g) and is_subsystem(g, h) and is_subsystem(f, h)
        other = oracles.random_system(rng, F)
        if other and is_subsystem(other, g) and is_subsystem(g, h):
            assert is_subsystem(other, h)


def test_algebraic_laws_random():
    rng = random.Random(11)
    for _ in range(25):
        _, f = oracles.random_generated_system(rng, 2, 1)
        _, g = oracles.random_generated_system(rng, 2, 1)
        _, h = oracles.random_generated_system(rng, 2, 1)
        _, k = oracles.random_generated_system(rng, 1, 2)
        assert dual_system(dual_system(f)) == f
        assert dual_system(cartesian_product(f, k)) == cartesian_product(dual_system(f),
                                                                         dual_system(k))
        assert dual_system(union(f, g)) == union(dual_system(f), dual_system(g))
        assert union(f, g) == union(g, f)
        assert union(union(f, g), h) == union(f, union(g, h))
        assert computation_domain(union(f, g)) == computation_domain(f) | computation_domain(g)


def test_intersection_symmetry_random():
    rng = random.Random(12)
    for _ in range(20):
        F, f = oracles.random_generated_system(rng, 2, 1)
        g = union(oracles.random_system(rng, F, inputs=list(f.domain)) or f,
                  system({next(iter(f.domain)): set(f(next(iter(f.domain))))}))
        pi_f, pi_g = check_generated(f, F).computation, check_generated(g, F).computation
        fg = derived_computation("intersection", f, g, pi_f, pi_g, F)
        gf = derived_computation("intersection", g, f, pi_g, pi_f, F)
        assert set(fg) == set(gf)
        for (mu, u) in fg:
            left = {solve(F, mu, u, r) for r in fg[(mu, u)]}
            right = {solve(F, mu, u, r) for r in gf[(mu, u)]}
            assert left == right


def test_system_validation():
    with pytest.raises(ValueError):
        ExplicitSystem(1, 1, {})
    with pytest.raises(ValueError):
        ExplicitSystem(1, 1, {C0: set()})
    with pytest.raises(WidthMismatch):
        ExplicitSystem(1, 1, {C0: {Signal.constant("01")}})
