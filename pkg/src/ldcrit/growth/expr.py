"""Bound expressions: exact integers and symbolic applications of F_k and Ct_N."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property


class BoundExpr:
    """Base class; subclasses are frozen dataclasses, so expressions hash
    structurally (the hash is cached)."""

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, c: int) -> "BoundExpr":
        return plus(self, c)

    def __sub__(self, c: int) -> "BoundExpr":
        return plus(self, -c)

    def __str__(self) -> str:
        return render(self)

    @cached_property
    def _hash(self) -> int:
        return hash((type(self).__name__,) + tuple(v for k, v in vars(self).items() if k != "_hash"))


@dataclass(frozen=True, eq=True)
class Num(BoundExpr):
    value: int

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


@dataclass(frozen=True, eq=True)
class FApp(BoundExpr):
    k: int
    arg: BoundExpr

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


@dataclass(frozen=True, eq=True)
class CtApp(BoundExpr):
    n: int
    arg: BoundExpr

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


@dataclass(frozen=True, eq=True)
class CtChain(BoundExpr):
    """``Ct_N(Ct_{N+1}(...Ct_{M-1}(arg)...))``."""
    n: int
    m: int
    arg: BoundExpr

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


@dataclass(frozen=True, eq=True)
class Plus(BoundExpr):
    expr: BoundExpr
    c: int

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


@dataclass(frozen=True, eq=True)
class Pow2(BoundExpr):
    arg: BoundExpr

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


@dataclass(frozen=True, eq=True)
class Add(BoundExpr):
    """Sum of two symbolic quantities."""
    left: BoundExpr
    right: BoundExpr

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


@dataclass(frozen=True, eq=True)
class Diff(BoundExpr):
    """``left - right`` for a symbolic ``right``; the prover has no rule for it."""
    left: BoundExpr
    right: BoundExpr

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


@dataclass(frozen=True, eq=True)
class Var(BoundExpr):
    """A natural-number variable known to be at least ``least``."""
    name: str
    least: int = 0

    __str__ = BoundExpr.__str__
    __hash__ = BoundExpr.__hash__


def plus(e: BoundExpr, c: int) -> BoundExpr:
    if c == 0:
        return e
    if isinstance(e, Num):
        return Num(e.value + c)
    if isinstance(e, Plus):
        return plus(e.expr, e.c + c)
    return Plus(e, c)


def split(e: BoundExpr) -> tuple[BoundExpr | None, int]:
    """``(atom, c)`` with ``e = atom + c``; atom is None for numbers."""
    if isinstance(e, Num):
        return None, e.value
    if isinstance(e, Plus):
        return e.expr, e.c
    return e, 0


def render(e: BoundExpr) -> str:
    if isinstance(e, Num):
        v = e.value
        return str(v) if v.bit_length() <= 64 else f"<{v.bit_length()}-bit integer>"
    if isinstance(e, FApp):
        return f"F[{e.k}]({render(e.arg)})"
    if isinstance(e, CtApp):
        return f"Ct[{e.n}]({render(e.arg)})"
    if isinstance(e, CtChain):
        return f"Ctfunc[{e.n},{e.m}]({render(e.arg)})"
    if isinstance(e, Plus):
        sign = "+" if e.c >= 0 else "-"
        return f"{render(e.expr)} {sign} {abs(e.c)}"
    if isinstance(e, Pow2):
        return f"2^({render(e.arg)})"
    if isinstance(e, Add):
        return f"({render(e.left)}) + ({render(e.right)})"
    if isinstance(e, Diff):
        return f"({render(e.left)}) - ({render(e.right)})"
    if isinstance(e, Var):
        return e.name
    raise TypeError(e)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>Ctfunc|Ct|F)|(?P<op>[\[\](),+\-^]))")


class ExprSyntaxError(ValueError):
    pass


def parse_bound(text: str) -> BoundExpr:
    """Parse ``F[k](m)``, ``Ct[N](m)``, ``Ctfunc[N,M](m)``, ``2^(x)``,
    integer literals and ``+ c`` / ``- c`` with an integer ``c``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected input at {text[pos:]!r}")
        toks.append(m.group("num") or m.group("name") or m.group("op"))
        pos = m.end()
    toks = [t for t in toks if t is not None]
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take(expect=None):
        nonlocal i
        if i >= len(toks):
            raise ExprSyntaxError("unexpected end of expression")
        t = toks[i]
        if expect is not None and t != expect:
            raise ExprSyntaxError(f"expected {expect!r}, got {t!r}")
        i += 1
        return t

    def integer():
        t = take()
        if not t.isdigit():
            raise ExprSyntaxError(f"expected an integer, got {t!r}")
        return int(t)

    def atom():
        t = peek()
        if t is None:
            raise ExprSyntaxError("unexpected end of expression")
        if t.isdigit():
            v = integer()
            if peek() == "^":
                take("^")
                if v != 2:
                    raise ExprSyntaxError("only powers of 2 are supported")
                return Pow2(atom())
            return Num(v)
        if t == "(":
            take("(")
            e = expr()
            take(")")
            return e
        name = take()
        take("[")
        a = integer()
        b = None
        if name == "Ctfunc":
            take(",")
            b = integer()
        elif peek() == ",":
            raise ExprSyntaxError(f"{name} takes one index")
        take("]")
        take("(")
        arg = expr()
        take(")")
        if name == "F":
            return FApp(a, arg)
        if name == "Ct":
            return CtApp(a, arg)
        if name == "Ctfunc":
            return CtChain(a, b, arg)
        raise ExprSyntaxError(f"unknown function {name!r}")

    def expr():
        e = atom()
        while peek() in ("+", "-"):
            op = take()
            c = integer()
            e = plus(e, c if op == "+" else -c)
        return e

    out = expr()
    if i != len(toks):
        raise ExprSyntaxError(f"trailing input: {' '.join(toks[i:])}")
    return out
