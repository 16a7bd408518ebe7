"""Terms over the single generator ``j``: syntax trees, parsing and printing.

Terms are hash-consed, so structurally equal terms are the same object and
``==`` is identity.  Besides the generator, application and composition of the
free algebra, two extra leaves are provided for the proof calculus: ``id``
(the identity embedding) and named variables.
"""

from __future__ import annotations

import re
import threading
from functools import lru_cache
from typing import Iterator

__all__ = [
    "Term", "Gen", "Ident", "Var", "Apply", "Compose", "J", "ID",
    "ParseError", "UnknownNameError", "NameTable", "PRELUDE_NAMES",
    "j_sub", "parse_term", "render_term", "leaves", "depth", "is_pure",
    "app_spine", "app_chain", "Tokenizer", "TermParser",
]

_INTERN: dict[tuple, "Term"] = {}
_INTERN_LOCK = threading.Lock()


class Term:
    __slots__ = ("__weakref__",)

    def __setattr__(self, name, value):
        raise AttributeError("terms are immutable")

    def __repr__(self) -> str:
        return f"{type(self).__name__}<{render_term(self)}>"

    def __str__(self) -> str:
        return render_term(self)


def _intern(key: tuple, build) -> "Term":
    t = _INTERN.get(key)
    if t is not None:
        return t
    with _INTERN_LOCK:
        t = _INTERN.get(key)
        if t is None:
            t = build()
            _INTERN[key] = t
        return t


class Gen(Term):
    """The generator ``j``."""

    __slots__ = ()

    def __new__(cls):
        return _intern(("j",), lambda: object.__new__(cls))

    def __reduce__(self):
        return (Gen, ())


class Ident(Term):
    """The identity embedding ``id``."""

    __slots__ = ()

    def __new__(cls):
        return _intern(("id",), lambda: object.__new__(cls))

    def __reduce__(self):
        return (Ident, ())


class Var(Term):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        def build():
            t = object.__new__(cls)
            object.__setattr__(t, "name", name)
            return t
        return _intern(("var", name), build)

    def __reduce__(self):
        return (Var, (self.name,))


class Apply(Term):
    """``left(right)``: the image of ``right`` under ``left``."""

    __slots__ = ("left", "right")

    def __new__(cls, left: Term, right: Term):
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise TypeError("Apply children must be terms")

        def build():
            t = object.__new__(cls)
            object.__setattr__(t, "left", left)
            object.__setattr__(t, "right", right)
            return t
        return _intern(("app", id(left), id(right)), build)

    def __reduce__(self):
        return (Apply, (self.left, self.right))


class Compose(Term):
    """``left o right``."""

    __slots__ = ("left", "right")

    def __new__(cls, left: Term, right: Term):
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise TypeError("Compose children must be terms")

        def build():
            t = object.__new__(cls)
            object.__setattr__(t, "left", left)
            object.__setattr__(t, "right", right)
            return t
        return _intern(("comp", id(left), id(right)), build)

    def __reduce__(self):
        return (Compose, (self.left, self.right))


J = Gen()
ID = Ident()


@lru_cache(maxsize=None)
def j_sub(n: int) -> Term:
    """``j_1 = j``, ``j_{n+1} = j_n(j)``."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"j_n is defined for n >= 1, got {n!r}")
    if n == 1:
        return J
    if n > 64:
        # stay off deep lru recursion for large indices
        t = j_sub(64)
        for _ in range(n - 64):
            t = Apply(t, J)
        return t
    return Apply(j_sub(n - 1), J)


def _walk(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, (Apply, Compose)):
            stack.append(u.right)
            stack.append(u.left)


def leaves(t: Term) -> int:
    return sum(1 for u in _walk(t) if not isinstance(u, (Apply, Compose)))


def depth(t: Term) -> int:
    best = 0
    stack = [(t, 1)]
    while stack:
        u, d = stack.pop()
        best = max(best, d)
        if isinstance(u, (Apply, Compose)):
            stack.append((u.left, d + 1))
            stack.append((u.right, d + 1))
    return best


def is_pure(t: Term) -> bool:
    """True when ``t`` is built from ``j`` alone (no ``id``, no variables)."""
    return all(isinstance(u, (Gen, Apply, Compose)) for u in _walk(t))


def app_spine(t: Term) -> tuple[Term, list[Term]]:
    """Split a left-nested application ``h a1 ... an`` into ``(h, [a1..an])``."""
    args = []
    while isinstance(t, Apply):
        args.append(t.right)
        t = t.left
    args.reverse()
    return t, args


def app_chain(head: Term, args) -> Term:
    t = head
    for a in args:
        t = Apply(t, a)
    return t


# ---------------------------------------------------------------- names

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{msg}{where}")


class UnknownNameError(ParseError):
    pass


_NAME_RE = re.compile(r"^[A-Za-ik-z_][A-Za-z0-9_]*'*$")
_RESERVED = {"o", "id", "crit"}


class NameTable:
    """Abbreviations usable in term text.  Bindings are stored expanded."""

    def __init__(self, bindings: dict[str, Term] | None = None):
        self._b: dict[str, Term] = {}
        for k, v in (bindings or {}).items():
            self.bind(k, v)

    def bind(self, name: str, value: "Term | str") -> None:
        if not _NAME_RE.match(name) or name in _RESERVED:
            raise ValueError(f"invalid name {name!r}")
        if isinstance(value, str):
            value = parse_term(value, self)
        if not is_pure(value):
            raise ValueError(f"name {name!r} must be bound to a pure term")
        self._b[name] = value

    def lookup(self, name: str) -> Term | None:
        return self._b.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._b

    def items(self):
        return self._b.items()

    def copy(self) -> "NameTable":
        nt = NameTable()
        nt._b = dict(self._b)
        return nt

    @classmethod
    def prelude(cls) -> "NameTable":
        nt = cls()
        nt.bind("k", j_sub(10))
        nt.bind("k'", Apply(j_sub(10), j_sub(11)))
        nt.bind("k''", Apply(j_sub(9), j_sub(14)))
        nt.bind("kp", nt.lookup("k'"))
        nt.bind("kpp", nt.lookup("k''"))
        return nt


PRELUDE_NAMES = NameTable.prelude()


# ---------------------------------------------------------------- lexing

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<jn>j\d*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op><=|>=|~\[|[()<>=\],^:∘])
""", re.VERBOSE)


class Tokenizer:
    """Shared lexer for term and proof-script text."""

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
            kind = m.lastgroup
            val = m.group()
            if kind == "ws":
                pass
            elif kind == "op" and val == "∘":
                self.toks.append(("ident", "o", pos))
            else:
                self.toks.append((kind, val, pos))
            pos = m.end()
        self.toks.append(("eof", "", len(text)))
        self.i = 0

    def peek(self, k: int = 0) -> tuple[str, str, int]:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        if t[0] != "eof":
            self.i += 1
        return t

    def at(self, val: str, k: int = 0) -> bool:
        kind, v, _ = self.peek(k)
        return kind != "eof" and v == val

    def expect(self, val: str) -> None:
        kind, v, pos = self.next()
        if v != val or kind == "eof":
            raise ParseError(f"expected {val!r}, found {v or 'end of input'!r}", pos, self.text)


# ---------------------------------------------------------------- parsing

class TermParser:
    """Recursive-descent parser for the term grammar::

        expr := app { "o" app }        (left-assoc)
        app  := atom { atom }          (left-assoc juxtaposition)
        atom := "j" | "j" digits | "id" | name | "(" expr ")"
    """

    def __init__(self, tok: Tokenizer, names: NameTable | None = None,
                 variables: frozenset[str] | set[str] = frozenset(),
                 allow_id: bool = False):
        self.tok = tok
        self.names = names if names is not None else PRELUDE_NAMES
        self.variables = variables
        self.allow_id = allow_id

    def error(self, msg: str, pos: int | None = None):
        if pos is None:
            pos = self.tok.peek()[2]
        return ParseError(msg, pos, self.tok.text)

    def starts_atom(self) -> bool:
        kind, v, _ = self.tok.peek()
        if kind == "jn" or v == "(":
            return True
        return kind == "ident" and v not in ("o",)

    def parse_expr(self) -> Term:
        t = self.parse_app()
        while self.tok.at("o") and self.tok.peek()[0] == "ident":
            self.tok.next()
            t = Compose(t, self.parse_app())
        return t

    def parse_app(self) -> Term:
        if not self.starts_atom():
            kind, v, pos = self.tok.peek()
            raise self.error(f"expected a term, found {v or 'end of input'!r}", pos)
        t = self.parse_atom()
        while self.starts_atom():
            t = Apply(t, self.parse_atom())
        return t

    def parse_atom(self) -> Term:
        kind, v, pos = self.tok.next()
        if kind == "jn":
            if v == "j":
                return J
            n = int(v[1:])
            if n < 1:
                raise ParseError("j0 is undefined (indices start at 1)", pos, self.tok.text)
            return j_sub(n)
        if v == "(":
            t = self.parse_expr()
            self.tok.expect(")")
            return t
        if kind == "ident":
            return self.resolve_name(v, pos)
        raise ParseError(f"unexpected token {v!r}", pos, self.tok.text)

    def resolve_name(self, v: str, pos: int) -> Term:
        if v == "id":
            if not self.allow_id:
                raise ParseError("'id' is not allowed here", pos, self.tok.text)
            return ID
        if v in self.variables:
            return Var(v)
        t = self.names.lookup(v)
        if t is None:
            raise UnknownNameError(f"unknown name {v!r}", pos, self.tok.text)
        return t


def parse_term(text: str, names: NameTable | None = None) -> Term:
    tok = Tokenizer(text)
    p = TermParser(tok, names)
    t = p.parse_expr()
    kind, v, pos = tok.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {v!r}", pos, text)
    return t


# ---------------------------------------------------------------- printing

def _leaf_token(t: Term) -> str | None:
    if isinstance(t, Gen):
        return "j"
    if isinstance(t, Ident):
        return "id"
    if isinstance(t, Var):
        return t.name
    return None


def _join_atoms(atoms: list[str]) -> str:
    out = atoms[0]
    for prev, cur in zip(atoms, atoms[1:]):
        # identifiers swallow a following letter; bare j-tokens do not
        needs_space = (prev[-1].isalnum() or prev[-1] in "_'") and not prev.startswith("(") \
            and not re.fullmatch(r"j\d*", prev) and (cur[0].isalnum() or cur[0] == "_")
        out += (" " if needs_space else "") + cur
    return out


def render_app_atoms(t: Term) -> list[str]:
    head, args = app_spine(t)
    if isinstance(head, Compose):
        atoms = ["(" + render_term(head) + ")"]
    else:
        atoms = [_leaf_token(head)]
    for a in args:
        tok = _leaf_token(a)
        atoms.append(tok if tok is not None else "(" + render_term(a) + ")")
    return atoms


def render_term(t: Term) -> str:
    """Minimal-parenthesis rendering; ``parse_term(render_term(t)) is t``."""
    if isinstance(t, Compose):
        right = render_term(t.right)
        if isinstance(t.right, Compose):
            right = "(" + right + ")"
        return f"{render_term(t.left)} o {right}"
    return _join_atoms(render_app_atoms(t))
