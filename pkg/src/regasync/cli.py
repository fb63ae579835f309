"""``ars``: batch command line over a workspace file.

Exit codes: 0 affirmative / holds, 1 negative / fails, 2 usage, resolution,
width or definedness error, 3 the trajectory does not stabilize.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import regularity, systems
from .dsl import format_pi, format_system, parse_workspace
from .errors import ArsError, EventBudgetExceeded, NonStabilizing
from .genfn import format_genfn
from .schedule import format_schedule
from .signal import bits, bitstr, format_signal
from .solver import DEFAULT_MAX_EVENTS, membership, solve
from .traces import write_csv, write_vcd

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR, EXIT_UNSTABLE = 0, 1, 2, 3

COMBINE_OPS = ("dual", "product", "parallel", "serial", "serial-star", "intersect", "union")


class UsageError(ArsError):
    pass


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", encoding="utf-8", newline="")


def _emit(text, path):
    out = _open_out(path)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()


def _load(args):
    with open(args.workspace, encoding="utf-8") as fh:
        return parse_workspace(fh.read())


def cmd_solve(args) -> int:
    ws = _load(args)
    F = ws.get("genfn", args.genfn)
    u = ws.get("signal", args.input)
    r = ws.get("sched", args.sched)
    mu = bits(args.mu)
    try:
        x = solve(F, mu, u, r, args.max_events)
    except NonStabilizing as exc:
        print(f"non-stabilizing: cycle entered at t={exc.report.entry_time}: "
              + " -> ".join(bitstr(s) for s in exc.report.cycle), file=sys.stderr)
        return EXIT_UNSTABLE
    except EventBudgetExceeded as exc:
        print(f"non-stabilizing: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    out = _open_out(args.out)
    try:
        (write_vcd if args.format == "vcd" else write_csv)(x, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_member(args) -> int:
    ws = _load(args)
    F = ws.get("genfn", args.genfn)
    res = membership(F, ws.get("signal", args.state), ws.get("signal", args.input))
    if res.member:
        print(f"member: witness {format_schedule(res.witness)}")
        return EXIT_OK
    print(f"not a member: {res.conflict}")
    return EXIT_NEGATIVE


def cmd_check(args) -> int:
    ws = _load(args)
    f = ws.get("system", args.system)
    rep = regularity.check_generated(f, ws.get("genfn", args.genfn), jobs=args.jobs)
    if rep.generated:
        name = args.name or f"pi_{args.system}"
        _emit(f"# {args.system} is generated by {args.genfn}\n"
              f"pi {name} {format_pi(rep.computation)}\n", args.out)
        return EXIT_OK
    u, x, conflict = rep.counterexample
    print(f"not generated: input ({format_signal(u)}), state ({format_signal(x)}): {conflict}")
    return EXIT_NEGATIVE


def cmd_synth(args) -> int:
    ws = _load(args)
    F = regularity.synthesize_generator(ws.get("system", args.system))
    if F is None:
        print(f"no generator function exists for {args.system}: constraints conflict")
        return EXIT_NEGATIVE
    _emit(f"genfn {args.name or 'synth_' + args.system} {{ {format_genfn(F)} }}\n", args.out)
    return EXIT_OK


_ARITY = {"dual": 1, "product": 2, "parallel": 2, "serial": 2, "serial-star": 2,
          "intersect": 2, "union": 2}


def _combine(op, ops):
    if op == "dual":
        return systems.dual_system(*ops)
    if op == "product":
        return systems.cartesian_product(*ops)
    if op == "parallel":
        return systems.parallel_connection(*ops)
    if op == "serial":
        f, h = ops
        return systems.serial_compose(h, f)
    if op == "serial-star":
        f, h = ops
        return systems.serial_star_system(h, f)
    if op == "intersect":
        return systems.intersection(*ops)
    return systems.union(*ops)


def _operand_pis(ws, args, ops, genfns):
    pis = [ws.get("pi", p) for p in (args.pi or [])]
    while len(pis) < len(ops):
        k = len(pis)
        F = genfns[min(k, len(genfns) - 1)]
        rep = regularity.check_generated(ops[k], F, jobs=args.jobs)
        if not rep.generated:
            raise UsageError(f"operand {k + 1} is not generated by its generator function")
        pis.append(rep.computation)
    return pis


def cmd_combine(args) -> int:
    ws = _load(args)
    if len(args.operands) != _ARITY[args.op]:
        raise UsageError(f"--op {args.op} takes {_ARITY[args.op]} operand(s)")
    ops = [ws.get("system", name) for name in args.operands]
    combined = _combine(args.op, ops)
    name = args.name or f"{args.op.replace('-', '_')}_" + "_".join(args.operands)
    text = f"system {name} {format_system(combined)}\n"
    if args.derived:
        kind = {"serial-star": "serial_star", "intersect": "intersection"}.get(args.op, args.op)
        if kind == "serial":
            raise UsageError("derived functions exist for serial-star, not plain serial")
        genfns = [ws.get("genfn", g) for g in (args.genfn or [])]
        if not genfns:
            raise UsageError("--derived needs --genfn for each operand")
        pis = _operand_pis(ws, args, ops, genfns)
        sys_ops = list(reversed(ops)) if kind == "serial_star" else ops
        pi_ops = list(reversed(pis)) if kind == "serial_star" else pis
        init = systems.derived_initial(kind, *sys_ops)
        for u, mus in init.items():
            text += f"# i({format_signal(u)}) = {{{', '.join(sorted(map(bitstr, mus)))}}}\n"
        extra = (genfns[0],) if kind == "intersection" else ()
        pi = systems.derived_computation(kind, *sys_ops, *pi_ops, *extra)
        text += f"pi pi_{name} {format_pi(pi)}\n"
    _emit(text, args.out)
    return EXIT_OK


_VERIFY_OPERANDS = {"subsystem": (2, 1), "dual": (1, 1), "product": (2, 2),
                    "parallel": (2, 2), "serial": (2, 2), "intersection": (2, 1),
                    "union": (2, 1)}


def cmd_verify(args) -> int:
    ws = _load(args)
    n_sys, n_fn = _VERIFY_OPERANDS[args.theorem]
    if len(args.operands) != n_sys:
        raise UsageError(f"theorem {args.theorem} takes {n_sys} system operand(s)")
    genfns = [ws.get("genfn", g) for g in (args.genfn or [])]
    if len(genfns) != n_fn:
        raise UsageError(f"theorem {args.theorem} takes {n_fn} --genfn option(s)")
    ops = [ws.get("system", name) for name in args.operands]
    pis = [ws.get("pi", p) for p in (args.pi or [])]
    pis += [None] * (n_sys - len(pis))
    kw = {"max_events": args.max_events}
    t = args.theorem
    if t == "dual":
        report = regularity.verify_dual_theorem(ops[0], genfns[0], pis[0], **kw)
    elif t in ("product", "parallel", "serial"):
        fn = getattr(regularity, f"verify_{t}_theorem")
        report = fn(ops[0], ops[1], genfns[0], genfns[1], pis[0], pis[1], **kw)
    else:
        fn = getattr(regularity, f"verify_{t}_theorem")
        report = fn(ops[0], ops[1], genfns[0], pis[0], pis[1], **kw)
    print(regularity.render_text(report))
    if args.report:
        _emit(json.dumps(regularity.report_to_dict(report), indent=2) + "\n", args.report)
    return EXIT_OK if report.holds else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ars", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("workspace", help="workspace file")
        p.add_argument("--max-events", type=int, default=DEFAULT_MAX_EVENTS)
        p.add_argument("--jobs", type=int, default=1,
                       help="worker processes for membership batches (output unaffected)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.set_defaults(func=fn)
        return p

    p = add("solve", cmd_solve, "solve the evolution equation and export the trace")
    p.add_argument("--genfn", required=True)
    p.add_argument("--mu", required=True, help="initial state as a bit string")
    p.add_argument("--input", required=True)
    p.add_argument("--sched", required=True)
    p.add_argument("--format", choices=("csv", "vcd"), default="csv")

    p = add("member", cmd_member, "decide whether a state is a trajectory of a generator")
    p.add_argument("--genfn", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--input", required=True)

    p = add("check", cmd_check, "check that a system is generated by a generator function")
    p.add_argument("--system", required=True)
    p.add_argument("--genfn", required=True)
    p.add_argument("--name", help="name of the emitted computation function")

    p = add("synth", cmd_synth, "synthesize a generator function for a system")
    p.add_argument("--system", required=True)
    p.add_argument("--name")

    p = add("combine", cmd_combine, "combine systems (serial operands: first stage, second stage)")
    p.add_argument("--op", required=True, choices=COMBINE_OPS)
    p.add_argument("operands", nargs="+")
    p.add_argument("--name")
    p.add_argument("--derived", action="store_true",
                   help="also emit the derived initial-state and computation functions")
    p.add_argument("--genfn", action="append")
    p.add_argument("--pi", action="append")

    p = add("verify", cmd_verify, "verify a combinator theorem on explicit systems")
    p.add_argument("--theorem", required=True, choices=regularity.THEOREMS)
    p.add_argument("operands", nargs="+")
    p.add_argument("--genfn", action="append")
    p.add_argument("--pi", action="append")
    p.add_argument("--report", help="write the structured JSON report to this path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ArsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
