"""Generator functions B^n x B^m -> B^n stored as exhaustive truth tables.

Table index convention: the concatenated assignment ``state + input`` is read
as a binary number with ``x1`` as the most significant bit and ``um`` as the
least significant one.  Expressions (``source``) are kept for printing only;
equality compares tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import (ArityCapExceeded, ArityError, DslSyntaxError, InputWidthMismatch,
                     UnknownVariable, WidthMismatch)
from .lexer import TokenStream, tokenize
from .signal import bits, bitstr, negate

ARITY_CAP = 20


# -- expressions --------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    kind: str  # "x" (state) or "u" (input)
    index: int  # 1-based


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # "&", "|" or "^"
    left: object
    right: object


_PREC = {"|": 1, "^": 2, "&": 3}


def evaluate(expr, state, inp) -> int:
    if isinstance(expr, Var):
        return (state if expr.kind == "x" else inp)[expr.index - 1]
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Not):
        return 1 - evaluate(expr.arg, state, inp)
    a = evaluate(expr.left, state, inp)
    b = evaluate(expr.right, state, inp)
    if expr.op == "&":
        return a & b
    if expr.op == "|":
        return a | b
    return a ^ b


def mk_not(e):
    if isinstance(e, Not):
        return e.arg
    if isinstance(e, Const):
        return Const(1 - e.value)
    return Not(e)


def substitute(expr, mapping: Callable):
    """Replace every ``Var`` by ``mapping(var)``."""
    if isinstance(expr, Var):
        return mapping(expr)
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Not):
        return mk_not(substitute(expr.arg, mapping))
    return BinOp(expr.op, substitute(expr.left, mapping), substitute(expr.right, mapping))


def format_expr(expr, parent_prec=0) -> str:
    if isinstance(expr, Var):
        return f"{expr.kind}{expr.index}"
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Not):
        return "!" + format_expr(expr.arg, 4)
    prec = _PREC[expr.op]
    # right operand gets prec+1 so that the tree shape survives a re-parse
    text = f"{format_expr(expr.left, prec)} {expr.op} {format_expr(expr.right, prec + 1)}"
    return f"({text})" if prec < parent_prec else text


def parse_expr(ts: TokenStream, n: int, m: int):
    return _parse_binary(ts, n, m, 1)


def _parse_binary(ts, n, m, prec):
    if prec > 3:
        return _parse_unary(ts, n, m)
    op = {1: "|", 2: "^", 3: "&"}[prec]
    left = _parse_binary(ts, n, m, prec + 1)
    while ts.accept(op):
        left = BinOp(op, left, _parse_binary(ts, n, m, prec + 1))
    return left


def _parse_unary(ts, n, m):
    if ts.accept("!"):
        return Not(_parse_unary(ts, n, m))
    if ts.accept("("):
        e = parse_expr(ts, n, m)
        ts.expect(")")
        return e
    tok = ts.next()
    if tok.kind == "num" and tok.text in ("0", "1"):
        return Const(int(tok.text))
    if tok.kind == "name" and tok.text[0] in "xu" and tok.text[1:].isdigit():
        kind, idx = tok.text[0], int(tok.text[1:])
        bound = n if kind == "x" else m
        if not 1 <= idx <= bound:
            raise UnknownVariable(f"unknown variable {tok.text} (have {kind}1..{kind}{bound})",
                                  tok.line, tok.column)
        return Var(kind, idx)
    if tok.kind == "name":
        raise UnknownVariable(f"unknown variable {tok.text}", tok.line, tok.column)
    raise DslSyntaxError(f"expected an expression, found {tok.text or 'end of input'!r}",
                         tok.line, tok.column)


# -- generator functions ------------------------------------------------------

def assignments(n: int, m: int):
    """All (state, input) pairs in table index order."""
    for combo in itertools.product((0, 1), repeat=n + m):
        yield combo[:n], combo[n:]


def index_of(state, inp) -> int:
    i = 0
    for b in state:
        i = (i << 1) | b
    for b in inp:
        i = (i << 1) | b
    return i


def _check_arity(n, m):
    if n < 1 or m < 1:
        raise ValueError("state and input widths must be positive")
    if n + m > ARITY_CAP:
        raise ArityCapExceeded(f"n+m = {n + m} exceeds the cap of {ARITY_CAP}")


@dataclass(frozen=True)
class GeneratorFunction:
    state_width: int
    input_width: int
    table: tuple
    source: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        n, m = self.state_width, self.input_width
        _check_arity(n, m)
        table = tuple(bits(v) for v in self.table)
        if len(table) != 1 << (n + m):
            raise ValueError(f"table needs {1 << (n + m)} entries, got {len(table)}")
        if any(len(v) != n for v in table):
            raise WidthMismatch(f"table entries must have width {n}")
        object.__setattr__(self, "table", table)
        if self.source is not None:
            if len(self.source) != n:
                raise ArityError(f"need {n} coordinate expressions, got {len(self.source)}")
            object.__setattr__(self, "source", tuple(self.source))

    @classmethod
    def from_function(cls, n: int, m: int, fn: Callable, source=None) -> "GeneratorFunction":
        _check_arity(n, m)
        return cls(n, m, tuple(tuple(fn(s, u)) for s, u in assignments(n, m)), source)

    @classmethod
    def from_source(cls, n: int, m: int, exprs) -> "GeneratorFunction":
        exprs = tuple(exprs)
        return cls.from_function(n, m, lambda s, u: [evaluate(e, s, u) for e in exprs], exprs)

    def __call__(self, state, inp):
        return self.eval(state, inp)

    def eval(self, state, inp):
        if len(state) != self.state_width or len(inp) != self.input_width:
            raise WidthMismatch(f"expected widths ({self.state_width}, {self.input_width}), "
                                f"got ({len(state)}, {len(inp)})")
        return self.table[index_of(state, inp)]

    def __str__(self):
        return format_genfn(self)


def eval_genfn(F: GeneratorFunction, state, inp):
    return F.eval(state, inp)


def identity(n: int, m: int) -> GeneratorFunction:
    return GeneratorFunction.from_source(n, m, [Var("x", i) for i in range(1, n + 1)])


def _both(*fns):
    return all(f.source is not None for f in fns)


def dual(F: GeneratorFunction) -> GeneratorFunction:
    n, m = F.state_width, F.input_width
    source = None
    if F.source is not None:
        source = tuple(mk_not(substitute(e, mk_not)) for e in F.source)
    return GeneratorFunction.from_function(
        n, m, lambda s, u: negate(F.eval(negate(s), negate(u))), source)


def product(F: GeneratorFunction, G: GeneratorFunction) -> GeneratorFunction:
    n, m, n2, m2 = F.state_width, F.input_width, G.state_width, G.input_width
    source = None
    if _both(F, G):
        shift = lambda v: Var(v.kind, v.index + (n if v.kind == "x" else m))
        source = F.source + tuple(substitute(e, shift) for e in G.source)
    return GeneratorFunction.from_function(
        n + n2, m + m2, lambda s, u: F.eval(s[:n], u[:m]) + G.eval(s[n:], u[m:]), source)


def parallel(F: GeneratorFunction, G: GeneratorFunction) -> GeneratorFunction:
    if F.input_width != G.input_width:
        raise InputWidthMismatch(f"input widths differ: {F.input_width} vs {G.input_width}")
    n, n2, m = F.state_width, G.state_width, F.input_width
    source = None
    if _both(F, G):
        shift = lambda v: Var("x", v.index + n) if v.kind == "x" else v
        source = F.source + tuple(substitute(e, shift) for e in G.source)
    return GeneratorFunction.from_function(
        n + n2, m, lambda s, u: F.eval(s[:n], u) + G.eval(s[n:], u), source)


def serial_star(H: GeneratorFunction, F: GeneratorFunction) -> GeneratorFunction:
    """((mu, lam), nu) -> (F(mu, nu), H(lam, F(mu, nu)))."""
    if H.input_width != F.state_width:
        raise WidthMismatch(f"second stage reads {H.input_width} bits but the first "
                            f"stage has {F.state_width} state bits")
    n, p, m = F.state_width, H.state_width, F.input_width

    def fn(s, u):
        first = F.eval(s[:n], u)
        return first + H.eval(s[n:], first)

    source = None
    if _both(F, H):
        feed = lambda v: Var("x", v.index + n) if v.kind == "x" else F.source[v.index - 1]
        source = F.source + tuple(substitute(e, feed) for e in H.source)
    return GeneratorFunction.from_function(n + p, m, fn, source)


def format_genfn(F: GeneratorFunction) -> str:
    """Body text accepted by :func:`parse_genfn`."""
    head = f"n={F.state_width} m={F.input_width}"
    if F.source is None:
        return head + " ; table " + " ".join(bitstr(v) for v in F.table)
    return " ; ".join([head] + [f"x{i}' = {format_expr(e)}"
                                for i, e in enumerate(F.source, 1)])


def parse_genfn_tokens(ts: TokenStream, terminators=("eof",)) -> GeneratorFunction:
    def at_end():
        tok = ts.peek()
        return tok.kind == "eof" or (tok.kind == "sym" and tok.text in terminators)

    decl = {}
    for key in ("n", "m"):
        tok = ts.peek()
        if not ts.accept(key):
            raise ts.error(f"expected declaration {key}=<int>")
        ts.expect("=")
        num = ts.expect_kind("num", "an integer")
        if not num.text.isdigit():
            raise ts.error("expected a positive integer", num)
        decl[key] = int(num.text)
    n, m = decl["n"], decl["m"]
    if n < 1 or m < 1:
        raise ArityError("n and m must be positive", tok.line, tok.column)
    if n + m > ARITY_CAP:
        raise ArityCapExceeded(f"n+m = {n + m} exceeds the cap of {ARITY_CAP}")

    exprs: dict = {}
    table = None
    while ts.accept(";") or ts.peek().kind == "newline":
        ts.skip_newlines()
        if at_end():
            break
        tok = ts.peek()
        if ts.accept("table"):
            entries = []
            while ts.peek().kind == "num":
                t = ts.next()
                if any(c not in "01" for c in t.text) or len(t.text) != n:
                    raise DslSyntaxError(f"table entry {t.text!r} is not a {n}-bit string",
                                         t.line, t.column)
                entries.append(bits(t.text))
            if len(entries) != 1 << (n + m):
                raise ArityError(f"table needs {1 << (n + m)} entries, got {len(entries)}",
                                 tok.line, tok.column)
            table = tuple(entries)
            continue
        name = ts.expect_kind("name", "a coordinate definition x<i>'")
        if name.text[0] != "x" or not name.text[1:].isdigit():
            raise DslSyntaxError(f"expected x<i>', found {name.text!r}", name.line, name.column)
        idx = int(name.text[1:])
        if not 1 <= idx <= n:
            raise UnknownVariable(f"no state coordinate {name.text} (n={n})",
                                  name.line, name.column)
        if idx in exprs:
            raise ArityError(f"coordinate {name.text} defined twice", name.line, name.column)
        ts.expect("'")
        ts.expect("=")
        exprs[idx] = parse_expr(ts, n, m)
    if not at_end():
        raise ts.error(f"unexpected {ts.peek().text!r}")
    if table is not None:
        if exprs:
            raise ArityError("use either a table or coordinate expressions, not both",
                             tok.line, tok.column)
        return GeneratorFunction(n, m, table)
    missing = [i for i in range(1, n + 1) if i not in exprs]
    if missing:
        tok = ts.peek()
        raise ArityError("missing definitions for " + ", ".join(f"x{i}'" for i in missing),
                         tok.line, tok.column)
    return GeneratorFunction.from_source(n, m, [exprs[i] for i in range(1, n + 1)])


def parse_genfn(text: str) -> GeneratorFunction:
    """Parse ``"n=2 m=1 ; x1' = !x2 & u1 ; x2' = x1 | u1"``."""
    ts = TokenStream(tokenize(text))
    ts.skip_newlines()
    F = parse_genfn_tokens(ts)
    ts.skip_newlines()
    ts.expect_kind("eof", "end of input")
    return F
