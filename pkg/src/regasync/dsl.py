"""Workspace files: named generator functions, signals, schedules, systems
and computation functions.

    # comments run to the end of the line
    genfn F { n=1 m=1 ; x1' = u1 }
    signal u = init 0 ; 1:1 ; 5/2:0
    sched r = sched n=1 prefix[1:{1}] tail anchor=2 period=1 [0:{1}]
    system f { u -> { x, (init 0 ; 3:1) } ; (init 1) -> { (init 1) } }
    pi p { (0, u) -> { r, (sched n=1 prefix[] tail anchor=0 period=1 [0:{1}]) } }

Signal and schedule definitions end at the line break; inside a system or
``pi`` block, inline literals must be parenthesized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DslSyntaxError, DslWidthMismatch, DuplicateName, UnresolvedReference
from .genfn import format_genfn, parse_genfn_tokens
from .lexer import Token, TokenStream, tokenize
from .schedule import Schedule, format_schedule
from .signal import Signal, bits, bitstr, canonicalize, format_signal
from .systems import ExplicitSystem

KINDS = ("genfn", "signal", "sched", "system", "pi")


@dataclass
class Workspace:
    genfns: dict = field(default_factory=dict)
    signals: dict = field(default_factory=dict)
    schedules: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)
    pis: dict = field(default_factory=dict)

    def table(self, kind: str) -> dict:
        return {"genfn": self.genfns, "signal": self.signals, "sched": self.schedules,
                "system": self.systems, "pi": self.pis}[kind]

    def get(self, kind: str, name: str):
        try:
            return self.table(kind)[name]
        except KeyError:
            raise UnresolvedReference(f"no {kind} named {name!r}") from None

    def __len__(self):
        return sum(len(self.table(k)) for k in KINDS)


class _Parser:
    def __init__(self, text):
        self.ts = TokenStream(tokenize(text))
        self.ws = Workspace()

    # -- literals

    def time(self) -> Fraction:
        tok = self.ts.expect_kind("num", "a time")
        return Fraction(tok.text)

    def bitvec(self, width=None):
        tok = self.ts.expect_kind("num", "a bit string")
        if any(c not in "01" for c in tok.text):
            raise DslSyntaxError(f"{tok.text!r} is not a bit string", tok.line, tok.column)
        if width is not None and len(tok.text) != width:
            raise DslWidthMismatch(f"expected {width} bits, got {tok.text!r}",
                                   tok.line, tok.column)
        return bits(tok.text)

    def integer(self) -> int:
        tok = self.ts.expect_kind("num", "an integer")
        if not tok.text.isdigit():
            raise DslSyntaxError(f"expected a non-negative integer, got {tok.text!r}",
                                 tok.line, tok.column)
        return int(tok.text)

    def signal_literal(self) -> Signal:
        ts = self.ts
        ts.expect("init")
        initial = self.bitvec()
        raw = []
        while ts.at(";") and ts.peek(1).kind == "num" and ts.at(":", 2):
            ts.next()
            tok = ts.peek()
            t = self.time()
            ts.expect(":")
            v = self.bitvec(len(initial))
            if raw and t <= raw[-1][0]:
                raise DslSyntaxError(f"switch time {t} does not exceed {raw[-1][0]}",
                                     tok.line, tok.column)
            raw.append((t, v))
        return canonicalize(initial, raw)

    def fireset(self, width):
        ts = self.ts
        ts.expect("{")
        out = set()
        while True:
            tok = ts.peek()
            i = self.integer()
            if not 1 <= i <= width:
                raise DslWidthMismatch(f"coordinate {i} outside 1..{width}", tok.line, tok.column)
            out.add(i)
            if not ts.accept(","):
                break
        ts.expect("}")
        return frozenset(out)

    def timed_firesets(self, width):
        ts = self.ts
        ts.expect("[")
        out = []
        while not ts.at("]"):
            t = self.time()
            ts.expect(":")
            out.append((t, self.fireset(width)))
            if not ts.accept(";"):
                break
        ts.expect("]")
        return out

    def sched_literal(self) -> Schedule:
        ts = self.ts
        start = ts.expect("sched")
        ts.expect("n")
        ts.expect("=")
        width = self.integer()
        ts.expect("prefix")
        prefix = self.timed_firesets(width)
        ts.expect("tail")
        ts.expect("anchor")
        ts.expect("=")
        anchor = self.time()
        ts.expect("period")
        ts.expect("=")
        period = self.time()
        pattern = self.timed_firesets(width)
        try:
            return Schedule(width, tuple(prefix), anchor, period, tuple(pattern))
        except ValueError as exc:
            raise DslSyntaxError(f"invalid schedule: {exc}", start.line, start.column) from None

    def ref_or_inline(self, kind):
        ts = self.ts
        if ts.accept("("):
            value = self.signal_literal() if kind == "signal" else self.sched_literal()
            ts.expect(")")
            return value
        tok = ts.expect_kind("name", f"a {kind} name or parenthesized literal")
        if tok.text not in self.ws.table(kind):
            raise UnresolvedReference(f"undefined {kind} {tok.text!r}", tok.line, tok.column)
        return self.ws.table(kind)[tok.text]

    # -- definitions

    def name(self, kind) -> Token:
        tok = self.ts.expect_kind("name", f"a {kind} name")
        if tok.text in self.ws.table(kind):
            raise DuplicateName(f"{kind} {tok.text!r} is already defined", tok.line, tok.column)
        return tok

    def definition(self):
        ts = self.ts
        head = ts.expect_kind("name", "a definition keyword")
        if head.text not in KINDS:
            raise DslSyntaxError(f"unknown definition keyword {head.text!r}",
                                 head.line, head.column)
        kind = head.text
        name = self.name(kind)
        if kind == "genfn":
            ts.expect("{")
            value = parse_genfn_tokens(ts, terminators=("}",))
            ts.expect("}")
        elif kind == "signal":
            ts.expect("=")
            value = self.signal_literal()
        elif kind == "sched":
            ts.expect("=")
            value = self.sched_literal()
        elif kind == "system":
            value = self.system_body(name)
        else:
            value = self.pi_body(name)
        self.ws.table(kind)[name.text] = value
        tok = ts.peek()
        if tok.kind not in ("newline", "eof"):
            raise DslSyntaxError(f"unexpected {tok.text!r} after definition",
                                 tok.line, tok.column)

    def system_body(self, name):
        ts = self.ts
        ts.expect("{")
        entries = {}
        widths = None
        while not ts.at("}"):
            tok = ts.peek()
            u = self.ref_or_inline("signal")
            ts.expect("->")
            ts.expect("{")
            xs = [self.ref_or_inline("signal")]
            while ts.accept(","):
                xs.append(self.ref_or_inline("signal"))
            ts.expect("}")
            w = (u.width, xs[0].width)
            if widths is None:
                widths = w
            if w != widths or any(x.width != widths[1] for x in xs):
                raise DslWidthMismatch(f"system {name.text!r}: entry widths differ from "
                                       f"(m={widths[0]}, n={widths[1]})", tok.line, tok.column)
            if u in entries:
                raise DuplicateName(f"system {name.text!r}: input listed twice",
                                    tok.line, tok.column)
            entries[u] = frozenset(xs)
            if not ts.accept(";"):
                break
        ts.expect("}")
        if not entries:
            raise DslSyntaxError(f"system {name.text!r} has no entries", name.line, name.column)
        return ExplicitSystem(widths[0], widths[1], entries)

    def pi_body(self, name):
        ts = self.ts
        ts.expect("{")
        out = {}
        while not ts.at("}"):
            tok = ts.peek()
            ts.expect("(")
            mu = self.bitvec()
            ts.expect(",")
            u = self.ref_or_inline("signal")
            ts.expect(")")
            ts.expect("->")
            ts.expect("{")
            scheds = [self.ref_or_inline("sched")]
            while ts.accept(","):
                scheds.append(self.ref_or_inline("sched"))
            ts.expect("}")
            if any(r.width != len(mu) for r in scheds):
                raise DslWidthMismatch(f"pi {name.text!r}: schedule width differs from "
                                       f"{len(mu)}", tok.line, tok.column)
            if (mu, u) in out:
                raise DuplicateName(f"pi {name.text!r}: key listed twice", tok.line, tok.column)
            out[(mu, u)] = frozenset(scheds)
            if not ts.accept(";"):
                break
        ts.expect("}")
        return out

    def parse(self) -> Workspace:
        ts = self.ts
        while True:
            ts.skip_newlines()
            if ts.peek().kind == "eof":
                return self.ws
            self.definition()


def parse_workspace(text: str) -> Workspace:
    return _Parser(text).parse()


def parse_signal(text: str) -> Signal:
    p = _Parser(text)
    sig = p.signal_literal()
    p.ts.skip_newlines()
    p.ts.expect_kind("eof", "end of signal")
    return sig


def parse_schedule(text: str) -> Schedule:
    p = _Parser(text)
    r = p.sched_literal()
    p.ts.skip_newlines()
    p.ts.expect_kind("eof", "end of schedule")
    return r


def _sig_ref(x, names):
    return names.get(x) or f"({format_signal(x)})"


def _sched_ref(r, names):
    return names.get(r) or f"({format_schedule(r)})"


def format_system(f: ExplicitSystem, signal_names=None) -> str:
    names = signal_names or {}
    entries = []
    for u, xs in f.items():
        states = ", ".join(sorted(_sig_ref(x, names) for x in xs))
        entries.append(f"  {_sig_ref(u, names)} -> {{ {states} }}")
    return "{\n" + " ;\n".join(entries) + "\n}"


def format_pi(pi: dict, signal_names=None, sched_names=None) -> str:
    snames, rnames = signal_names or {}, sched_names or {}
    entries = []
    for (mu, u), scheds in pi.items():
        rs = ", ".join(sorted(_sched_ref(r, rnames) for r in scheds))
        entries.append(f"  ({bitstr(mu)}, {_sig_ref(u, snames)}) -> {{ {rs} }}")
    return "{\n" + " ;\n".join(entries) + "\n}"


def format_workspace(ws: Workspace) -> str:
    signal_names = {v: k for k, v in reversed(list(ws.signals.items()))}
    sched_names = {v: k for k, v in reversed(list(ws.schedules.items()))}
    lines = []
    for name, F in ws.genfns.items():
        lines.append(f"genfn {name} {{ {format_genfn(F)} }}")
    for name, x in ws.signals.items():
        lines.append(f"signal {name} = {format_signal(x)}")
    for name, r in ws.schedules.items():
        lines.append(f"sched {name} = {format_schedule(r)}")
    for name, f in ws.systems.items():
        lines.append(f"system {name} {format_system(f, signal_names)}")
    for name, pi in ws.pis.items():
        lines.append(f"pi {name} {format_pi(pi, signal_names, sched_names)}")
    return "\n".join(lines) + "\n"
