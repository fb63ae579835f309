"""Generation checks, generator synthesis and the combinator theorem harness.

Every theorem verifier returns a :class:`TheoremReport`: a list of checked
claims.  A failed claim carries a witness (plain data, rendered for reports)
and a ``replay`` callable that recomputes the claim from the witness alone and
returns True when the failure is reproduced.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ArityCapExceeded, ArsError, PreconditionFailed, WidthMismatch
from .genfn import ARITY_CAP, GeneratorFunction, parallel, product, serial_star
from .genfn import dual as dual_genfn
from .schedule import format_schedule, pair_schedules
from .signal import bitstr, complement, format_signal, negate, pair
from .solver import DEFAULT_MAX_EVENTS, membership, solve
from .systems import (ExplicitSystem, cartesian_product, computation_domain, derived_computation,
                      derived_initial, dual_system, initial_state_function, intersection,
                      is_subsystem, parallel_connection, serial_star_system, union)

THEOREMS = ("subsystem", "dual", "product", "parallel", "serial", "intersection", "union")


@dataclass(frozen=True)
class GenerationReport:
    generated: bool
    computation: Optional[dict] = None
    counterexample: Optional[tuple] = None  # (input, state, conflict)


@dataclass
class Check:
    claim: str
    passed: bool
    witness: Optional[dict] = None
    replay: Optional[Callable[[], bool]] = field(default=None, repr=False, compare=False)


@dataclass
class TheoremReport:
    theorem_id: str
    checks: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]


# -- generation ----------------------------------------------------------------

def _member_task(args):
    F, x, u = args
    return membership(F, x, u)


def check_generated(f: ExplicitSystem, F: GeneratorFunction, jobs: int = 1) -> GenerationReport:
    """Is every state of ``f`` a trajectory of ``F``?  Witnesses form pi_f."""
    if f.input_width != F.input_width or f.state_width != F.state_width:
        raise WidthMismatch(f"system is (m={f.input_width}, n={f.state_width}), generator is "
                            f"(m={F.input_width}, n={F.state_width})")
    pairs = [(u, x) for u, xs in f.items() for x in sorted(xs, key=format_signal)]
    tasks = [(F, x, u) for u, x in pairs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_member_task, tasks, chunksize=16))
    else:
        results = [_member_task(t) for t in tasks]
    pi: dict = {}
    for (u, x), res in zip(pairs, results):
        if not res.member:
            return GenerationReport(False, counterexample=(u, x, res.conflict))
        pi.setdefault((x.initial, u), set()).add(res.witness)
    return GenerationReport(True, {k: frozenset(v) for k, v in pi.items()})


def synthesize_generator(f: ExplicitSystem) -> Optional[GeneratorFunction]:
    """A generator function for ``f``, or None when the constraints clash."""
    n, m = f.state_width, f.input_width
    if n + m > ARITY_CAP:
        raise ArityCapExceeded(f"n+m = {n + m} exceeds the cap of {ARITY_CAP}")
    required: dict = {}

    def demand(state, inp, i, value):
        cell = required.setdefault(state + inp, {})
        if cell.setdefault(i, value) != value:
            return False
        return True

    for u, xs in f.items():
        for x in xs:
            before = x.initial
            for t, after in x.switches:
                inp = u.left_limit(t)
                for i in range(n):
                    if after[i] != before[i] and not demand(before, inp, i, after[i]):
                        return None
                before = after
            xi, nu = x.final_value(), u.final_value()
            for i in range(n):
                if not demand(xi, nu, i, xi[i]):
                    return None

    def fn(state, inp):
        cell = required.get(state + inp, {})
        return [cell.get(i, state[i]) for i in range(n)]

    return GeneratorFunction.from_function(n, m, fn)


# -- helpers -------------------------------------------------------------------

def _replay(F, mu, u, r, max_events=DEFAULT_MAX_EVENTS):
    """Solved trajectory, or the solver exception."""
    try:
        return solve(F, mu, u, r, max_events)
    except ArsError as exc:
        return exc


def _show(value):
    if value is None:
        return None
    if isinstance(value, tuple) and all(b in (0, 1) for b in value):
        return bitstr(value)
    if hasattr(value, "switches"):
        return format_signal(value)
    if hasattr(value, "tail_pattern"):
        return format_schedule(value)
    if isinstance(value, (set, frozenset)):
        return sorted(_show(v) for v in value)
    if isinstance(value, Exception):
        return f"{type(value).__name__}: {value}"
    return str(value)


def _witness(**items):
    return {k: _show(v) for k, v in items.items()}


def generation_check(claim, system, F) -> Check:
    rep = check_generated(system, F)
    if rep.generated:
        return Check(claim, True)
    u, x, conflict = rep.counterexample
    return Check(claim, False, _witness(input=u, state=x, conflict=conflict),
                 lambda: not membership(F, x, u).member)


def initial_check(claim, system, formula, recompute_formula) -> Check:
    realized = initial_state_function(system)
    if realized == formula:
        return Check(claim, True)
    for u in list(formula) + list(realized):
        if formula.get(u) != realized.get(u):
            break

    def replay():
        return recompute_formula().get(u) != initial_state_function(system).get(u)

    return Check(claim, False, _witness(input=u, formula=formula.get(u),
                                        realized=realized.get(u)), replay)


def computation_checks(label, system, F, pi, max_events=DEFAULT_MAX_EVENTS) -> list:
    """pi is a computation function of ``system`` under ``F``."""
    checks = []
    W = computation_domain(system)
    extra = sorted(set(pi) - W, key=_show)
    missing = sorted(W - set(pi), key=_show)
    if extra or missing:
        mu, u = (extra or missing)[0]
        checks.append(Check(f"{label}: domain equals W", False,
                            _witness(initial=mu, input=u,
                                     side="formula only" if extra else "system only"),
                            lambda: ((mu, u) in pi) != ((mu, u) in computation_domain(system))))
    else:
        checks.append(Check(f"{label}: domain equals W", True))

    bad = None
    reached: dict = {}
    for (mu, u), scheds in pi.items():
        for r in sorted(scheds, key=format_schedule):
            traj = _replay(F, mu, u, r, max_events)
            if isinstance(traj, Exception) or u not in system.entries or traj not in system(u):
                bad = bad or (mu, u, r, traj)
            else:
                reached.setdefault(u, set()).add(traj)
    if bad:
        mu, u, r, traj = bad
        checks.append(Check(f"{label}: every schedule replays into the system", False,
                            _witness(initial=mu, input=u, schedule=r, trajectory=traj),
                            lambda: _escapes(system, F, mu, u, r, max_events)))
    else:
        checks.append(Check(f"{label}: every schedule replays into the system", True))

    for u, xs in system.items():
        gap = [x for x in xs if x not in reached.get(u, ())]
        if gap:
            x = min(gap, key=format_signal)
            checks.append(Check(f"{label}: every state is produced by a schedule", False,
                                _witness(input=u, state=x),
                                lambda: not _realized(system, F, pi, x, u, max_events)))
            break
    else:
        checks.append(Check(f"{label}: every state is produced by a schedule", True))
    return checks


def _escapes(system, F, mu, u, r, max_events):
    traj = _replay(F, mu, u, r, max_events)
    return isinstance(traj, Exception) or u not in system.entries or traj not in system(u)


def _realized(system, F, pi, x, u, max_events):
    return any(_replay(F, x.initial, u, r, max_events) == x
               for r in pi.get((x.initial, u), ()))


def _operand_pi(f, F, pi, name):
    """Validated computation function for an operand (built when absent)."""
    if pi is None:
        rep = check_generated(f, F)
        if not rep.generated:
            u, x, conflict = rep.counterexample
            raise PreconditionFailed(f"{name} is not generated by its generator function: "
                                     f"input {u}, state {x}: {conflict}")
        return rep.computation
    bad = [c for c in computation_checks(name, f, F, pi) if not c.passed]
    if bad:
        raise PreconditionFailed(f"invalid computation function for {name}: {bad[0].claim} "
                                 f"{bad[0].witness}")
    return pi


# -- theorems ------------------------------------------------------------------

def verify_subsystem_theorem(f, g, F, pi_f=None, pi_g=None,
                             max_events=DEFAULT_MAX_EVENTS) -> TheoremReport:
    pi_f = _operand_pi(f, F, pi_f, "f")
    pi_g = _operand_pi(g, F, pi_g, "g")

    def statement_a():
        return is_subsystem(f, g)

    def statement_b():
        """(holds, reason) for the schedule-level characterisation."""
        outside = [u for u in f.domain if u not in g.entries]
        if outside:
            return False, _witness(reason="input outside V", input=outside[0])
        i_f, i_g = initial_state_function(f), initial_state_function(g)
        for u in f.domain:
            if not i_f[u] <= i_g[u]:
                return False, _witness(reason="initial value outside i_g", input=u,
                                       initial=min(i_f[u] - i_g[u]))
        for (mu, u), scheds in pi_f.items():
            targets = {_replay(F, mu, u, r2, max_events) for r2 in pi_g[(mu, u)]}
            for r in sorted(scheds, key=format_schedule):
                if _replay(F, mu, u, r, max_events) not in targets:
                    return False, _witness(reason="no matching schedule in pi_g", initial=mu,
                                           input=u, schedule=r)
        return True, None

    a = statement_a()
    b, why = statement_b()
    info = {"a": a, "b": b, "b_detail": why}
    forward = Check("a) f is a subsystem of g implies b)", (not a) or b, info,
                    lambda: statement_a() and not statement_b()[0])
    backward = Check("b) implies a) f is a subsystem of g", (not b) or a, info,
                     lambda: statement_b()[0] and not statement_a())
    return TheoremReport("subsystem", [forward, backward])


def verify_dual_theorem(f, F, pi_f=None, max_events=DEFAULT_MAX_EVENTS) -> TheoremReport:
    pi_f = _operand_pi(f, F, pi_f, "f")
    fs, Fs = dual_system(f), dual_genfn(F)
    checks = [generation_check("dual system is generated by the dual function", fs, Fs)]
    checks.append(initial_check("initial state function of f* matches the formula", fs,
                                derived_initial("dual", f), lambda: derived_initial("dual", f)))
    pi = derived_computation("dual", f, pi_f)
    checks += computation_checks("pi_f*", fs, Fs, pi, max_events)

    bad = None
    for (mu, u), scheds in pi_f.items():
        for r in scheds:
            left = _replay(F, mu, u, r, max_events)
            right = _replay(Fs, negate(mu), complement(u), r, max_events)
            if isinstance(left, Exception) or complement(left) != right:
                bad = bad or (mu, u, r)

    def replay(mu, u, r):
        left = _replay(F, mu, u, r, max_events)
        return isinstance(left, Exception) or (
            complement(left) != _replay(Fs, negate(mu), complement(u), r, max_events))

    checks.append(_identity_check("complement of a trajectory solves the dual equation",
                                  bad, replay))
    return TheoremReport("dual", checks)


def _identity_check(claim, bad, replay) -> Check:
    if bad is None:
        return Check(claim, True)
    names = ("initial", "input", "schedule", "initial2", "input2", "schedule2")
    return Check(claim, False, _witness(**dict(zip(names, bad))), lambda: replay(*bad))


def verify_product_theorem(f, f2, F, F2, pi_f=None, pi_f2=None,
                           max_events=DEFAULT_MAX_EVENTS) -> TheoremReport:
    pi_f = _operand_pi(f, F, pi_f, "f")
    pi_f2 = _operand_pi(f2, F2, pi_f2, "f'")
    fp, Fp = cartesian_product(f, f2), product(F, F2)
    checks = [generation_check("f x f' is generated by the product function", fp, Fp)]
    checks.append(initial_check("initial state function of f x f' matches the formula", fp,
                                derived_initial("product", f, f2),
                                lambda: derived_initial("product", f, f2)))
    pi = derived_computation("product", f, f2, pi_f, pi_f2)
    checks += computation_checks("pi_fxf'", fp, Fp, pi, max_events)

    def differs(mu, u, r, mu2, u2, r2):
        whole = _replay(Fp, mu + mu2, pair(u, u2), pair_schedules(r, r2), max_events)
        a, b = _replay(F, mu, u, r, max_events), _replay(F2, mu2, u2, r2, max_events)
        if isinstance(a, Exception) or isinstance(b, Exception):
            return True
        return whole != pair(a, b)

    bad = None
    for (mu, u), rs in pi_f.items():
        for (mu2, u2), rs2 in pi_f2.items():
            for r, r2 in itertools.product(rs, rs2):
                if bad is None and differs(mu, u, r, mu2, u2, r2):
                    bad = (mu, u, r, mu2, u2, r2)
    checks.append(_identity_check("product trajectory decomposes into operand trajectories",
                                  bad, differs))
    return TheoremReport("product", checks)


def verify_parallel_theorem(f, f1, F, F1, pi_f=None, pi_f1=None,
                            max_events=DEFAULT_MAX_EVENTS) -> TheoremReport:
    pi_f = _operand_pi(f, F, pi_f, "f")
    pi_f1 = _operand_pi(f1, F1, pi_f1, "f1'")
    fp, Fp = parallel_connection(f, f1), parallel(F, F1)
    checks = [generation_check("f || f1' is generated by the parallel function", fp, Fp)]
    checks.append(initial_check("initial state function of f || f1' matches the formula", fp,
                                derived_initial("parallel", f, f1),
                                lambda: derived_initial("parallel", f, f1)))
    pi = derived_computation("parallel", f, f1, pi_f, pi_f1)
    checks += computation_checks("pi_f||f1'", fp, Fp, pi, max_events)

    def differs(mu, u, r, mu1, u1, r1):
        whole = _replay(Fp, mu + mu1, u, pair_schedules(r, r1), max_events)
        a, b = _replay(F, mu, u, r, max_events), _replay(F1, mu1, u, r1, max_events)
        if isinstance(a, Exception) or isinstance(b, Exception):
            return True
        return whole != pair(a, b)

    bad = None
    for (mu, u), rs in pi_f.items():
        for (mu1, u1), rs1 in pi_f1.items():
            if u1 != u:
                continue
            for r, r1 in itertools.product(rs, rs1):
                if bad is None and differs(mu, u, r, mu1, u1, r1):
                    bad = (mu, u, r, mu1, u1, r1)
    checks.append(_identity_check("shared-input trajectory decomposes into operand trajectories",
                                  bad, differs))
    return TheoremReport("parallel", checks)


def verify_serial_theorem(f, h, F, H, pi_f=None, pi_h=None,
                          max_events=DEFAULT_MAX_EVENTS) -> TheoremReport:
    pi_f = _operand_pi(f, F, pi_f, "f")
    pi_h = _operand_pi(h, H, pi_h, "h")
    hf, HF = serial_star_system(h, f), serial_star(H, F)
    checks = [generation_check("h*f is generated by the serial-star function", hf, HF)]
    checks.append(initial_check("initial state function of h*f matches the formula", hf,
                                derived_initial("serial_star", h, f),
                                lambda: derived_initial("serial_star", h, f)))
    pi = derived_computation("serial_star", h, f, pi_f, pi_h)
    n = f.state_width
    # per-(rho, varpi) witnesses keep the two stages separate for readability
    bad = None
    for (ml, u), scheds in pi.items():
        mu, lam = ml[:n], ml[n:]
        for rho in sorted(pi_f[(mu, u)], key=format_schedule):
            varpis = set()
            for x in f(u):
                if x.initial == mu and (lam, x) in pi_h:
                    varpis |= pi_h[(lam, x)]
            for w in sorted(varpis, key=format_schedule):
                if bad is None and _escapes(hf, HF, ml, u, pair_schedules(rho, w), max_events):
                    traj = _replay(HF, ml, u, pair_schedules(rho, w), max_events)
                    bad = (u, mu, lam, rho, w, traj)
    claim = "every (rho, varpi) replays into (h*f)(u)"
    if bad is None:
        checks.append(Check(claim, True))
    else:
        u, mu, lam, rho, w, traj = bad
        checks.append(Check(claim, False,
                            _witness(input=u, initial=mu, initial2=lam, schedule=rho,
                                     schedule2=w, trajectory=traj),
                            lambda: _escapes(hf, HF, mu + lam, u, pair_schedules(rho, w),
                                             max_events)))
    checks += [c for c in computation_checks("pi_h*f", hf, HF, pi, max_events)
               if "replays" not in c.claim]
    return TheoremReport("serial", checks)


def verify_intersection_theorem(f, g, F, pi_f=None, pi_g=None,
                                max_events=DEFAULT_MAX_EVENTS) -> TheoremReport:
    pi_f = _operand_pi(f, F, pi_f, "f")
    pi_g = _operand_pi(g, F, pi_g, "g")
    fg = intersection(f, g)
    checks = [generation_check("f n g is generated by the common function", fg, F)]
    checks.append(initial_check("initial state function of f n g equals i_f n i_g", fg,
                                derived_initial("intersection", f, g),
                                lambda: derived_initial("intersection", f, g)))
    pi_fg = derived_computation("intersection", f, g, pi_f, pi_g, F, max_events=max_events)
    checks += computation_checks("pi_fng", fg, F, pi_fg, max_events)

    pi_gf = derived_computation("intersection", g, f, pi_g, pi_f, F, max_events=max_events)
    same = set(pi_fg) == set(pi_gf)
    key = None if same else min(set(pi_fg) ^ set(pi_gf), key=_show)
    checks.append(Check("symmetry: W_fng equals W_gnf", same,
                        None if same else _witness(initial=key[0], input=key[1]),
                        None if same else lambda: (key in derived_computation(
                            "intersection", f, g, pi_f, pi_g, F)) != (key in derived_computation(
                                "intersection", g, f, pi_g, pi_f, F))))

    def unmatched(key, left, right):
        mu, u = key
        targets = {_replay(F, mu, u, r, max_events) for r in right.get(key, ())}
        for r in sorted(left[key], key=format_schedule):
            if _replay(F, mu, u, r, max_events) not in targets:
                return r
        return None

    bad = None
    for k in sorted(set(pi_fg) & set(pi_gf), key=_show):
        for left, right in ((pi_fg, pi_gf), (pi_gf, pi_fg)):
            r = unmatched(k, left, right)
            if r is not None and bad is None:
                bad = (k, r, left, right)
    claim = "symmetry: trajectories of pi_fng and pi_gnf coincide"
    if bad is None:
        checks.append(Check(claim, True))
    else:
        k, r, left, right = bad
        checks.append(Check(claim, False, _witness(initial=k[0], input=k[1], schedule=r),
                            lambda: _replay(F, k[0], k[1], r, max_events) not in
                            {_replay(F, k[0], k[1], r2, max_events) for r2 in right[k]}))
    return TheoremReport("intersection", checks)


def verify_union_theorem(f, g, F, pi_f=None, pi_g=None,
                         max_events=DEFAULT_MAX_EVENTS) -> TheoremReport:
    pi_f = _operand_pi(f, F, pi_f, "f")
    pi_g = _operand_pi(g, F, pi_g, "g")
    fg = union(f, g)
    W_union = computation_domain(fg)
    W_parts = computation_domain(f) | computation_domain(g)
    if W_union == W_parts:
        lemma = Check("lemma: W_fug equals W_f u W_g", True)
    else:
        mu, u = min(W_union ^ W_parts, key=_show)
        lemma = Check("lemma: W_fug equals W_f u W_g", False, _witness(initial=mu, input=u),
                      lambda: ((mu, u) in computation_domain(union(f, g)))
                      != ((mu, u) in computation_domain(f) | computation_domain(g)))
    checks = [lemma, generation_check("f u g is generated by the common function", fg, F)]
    checks.append(initial_check("initial state function of f u g matches the formula", fg,
                                derived_initial("union", f, g),
                                lambda: derived_initial("union", f, g)))
    pi = derived_computation("union", f, g, pi_f, pi_g)
    checks += computation_checks("pi_fug", fg, F, pi, max_events)
    return TheoremReport("union", checks)


def verify_theorem(theorem: str, *args, **kwargs) -> TheoremReport:
    fn = {
        "subsystem": verify_subsystem_theorem,
        "dual": verify_dual_theorem,
        "product": verify_product_theorem,
        "parallel": verify_parallel_theorem,
        "serial": verify_serial_theorem,
        "intersection": verify_intersection_theorem,
        "union": verify_union_theorem,
    }[theorem]
    return fn(*args, **kwargs)


# -- rendering -----------------------------------------------------------------

def report_to_dict(report: TheoremReport) -> dict:
    return {
        "theorem": report.theorem_id,
        "holds": report.holds,
        "checks": [{"claim": c.claim, "status": "pass" if c.passed else "fail",
                    "witness": c.witness} for c in report.checks],
    }


def render_text(report: TheoremReport) -> str:
    lines = [f"theorem {report.theorem_id}: {'HOLDS' if report.holds else 'FAILS'}"]
    for c in report.checks:
        lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.claim}")
        if not c.passed and c.witness:
            for k, v in c.witness.items():
                lines.append(f"        {k}: {v}")
    return "\n".join(lines)
