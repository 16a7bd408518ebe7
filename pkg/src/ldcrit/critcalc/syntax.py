"""Ordinal expressions, relations, and their concrete syntax.

Embedding expressions are plain :class:`~ldcrit.term.Term` values (with
``id`` and variables allowed).  Ordinals::

    O := const | const "^" n | var | "crit(" E ")" | E "(" O ")" | E "(<" O ")"

Relations: ``A = B``, ``A < B``, ``A <= B`` (and ``>``, ``>=``, which are
stored flipped), ``E ~[O] F``, and ``E = F`` between embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..term import (
    ID, Apply, Compose, Gen, Ident, NameTable, ParseError, PRELUDE_NAMES, Term,
    TermParser, Tokenizer, Var, app_spine, j_sub,
)

ORD_CONSTS = ("kappa0", "kappa1", "kappa2", "kappa3", "kappa4", "kappa2_5",
              "sigma1", "sigma2", "mu", "nu", "xi")
KAPPAS = ("kappa0", "kappa1", "kappa2", "kappa2_5", "kappa3", "kappa4")


# ---------------------------------------------------------------- ordinals

@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class OVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Crit:
    emb: Term

    def __str__(self):
        return f"crit({render_emb(self.emb)})"


@dataclass(frozen=True)
class AppO:
    emb: Term
    arg: "Ord"

    def __str__(self):
        if isinstance(self.arg, Const) and self.arg.name in KAPPAS:
            n = _j_index(self.emb)
            if n is not None and n >= 2:
                return f"{self.arg.name}^{n}"
        return f"{_emb_head(self.emb)}({self.arg})"


@dataclass(frozen=True)
class SupBelow:
    """``emb(<arg)``: the strict supremum of ``emb(b)`` for ``b < arg``."""

    emb: Term
    arg: "Ord"

    def __str__(self):
        return f"{_emb_head(self.emb)}(<{self.arg})"


Ord = Union[Const, OVar, Crit, AppO, SupBelow]
ORD_TYPES = (Const, OVar, Crit, AppO, SupBelow)


# ---------------------------------------------------------------- relations

@dataclass(frozen=True)
class EqO:
    lhs: Ord
    rhs: Ord
    op = "="

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class LtO:
    lhs: Ord
    rhs: Ord
    op = "<"

    def __str__(self):
        return f"{self.lhs} < {self.rhs}"


@dataclass(frozen=True)
class LeO:
    lhs: Ord
    rhs: Ord
    op = "<="

    def __str__(self):
        return f"{self.lhs} <= {self.rhs}"


@dataclass(frozen=True)
class EquivAt:
    """``lhs`` and ``rhs`` agree (in the modified-restriction sense) below ``level``."""

    lhs: Term
    rhs: Term
    level: Ord

    def __str__(self):
        return f"{render_emb(self.lhs)} ~[{self.level}] {render_emb(self.rhs)}"


@dataclass(frozen=True)
class EqE:
    lhs: Term
    rhs: Term
    op = "="

    def __str__(self):
        return f"{render_emb(self.lhs)} = {render_emb(self.rhs)}"


Rel = Union[EqO, LtO, LeO, EquivAt, EqE]
ORDER_RELS = (EqO, LtO, LeO)


# ---------------------------------------------------------------- rendering

def _j_index(t: Term) -> int | None:
    head, args = app_spine(t)
    if isinstance(head, Gen) and all(a is Gen() for a in args):
        return len(args) + 1
    return None


def _emb_atoms(t: Term) -> list[str]:
    """Application spine as tokens, with ``j``-prefixes folded into ``jN``."""
    head, args = app_spine(t)
    atoms: list[str] = []
    if isinstance(head, Gen):
        k = 0
        while k < len(args) and args[k] is Gen():
            k += 1
        atoms.append("j" if k == 0 else f"j{k + 1}")
        args = args[k:]
    elif isinstance(head, Compose):
        atoms.append("(" + render_emb(head) + ")")
    elif isinstance(head, Ident):
        atoms.append("id")
    else:
        atoms.append(head.name)
    for a in args:
        if isinstance(a, Ident):
            atoms.append("id")
        elif isinstance(a, Var):
            atoms.append(a.name)
        else:
            n = _j_index(a)
            atoms.append(("j" if n == 1 else f"j{n}") if n is not None
                         else "(" + render_emb(a) + ")")
    return atoms


def render_emb(t: Term) -> str:
    if isinstance(t, Compose):
        right = render_emb(t.right)
        if isinstance(t.right, Compose):
            right = "(" + right + ")"
        return f"{render_emb(t.left)} o {right}"
    atoms = _emb_atoms(t)
    out = atoms[0]
    for cur in atoms[1:]:
        out += ("" if cur.startswith("(") else " ") + cur
    return out


def _emb_head(t: Term) -> str:
    s = render_emb(t)
    return f"({s})" if isinstance(t, Compose) else s


def render(x) -> str:
    if isinstance(x, Term):
        return render_emb(x)
    return str(x)


# ---------------------------------------------------------------- normalisation

def norm_emb(t: Term) -> Term:
    """Eliminate ``id``: ``id(x) = x``, ``x(id) = id``, ``id o x = x o id = x``."""
    if isinstance(t, Apply):
        l, r = norm_emb(t.left), norm_emb(t.right)
        if l is ID:
            return r
        if r is ID:
            return ID
        return t if (l is t.left and r is t.right) else Apply(l, r)
    if isinstance(t, Compose):
        l, r = norm_emb(t.left), norm_emb(t.right)
        if l is ID:
            return r
        if r is ID:
            return l
        return t if (l is t.left and r is t.right) else Compose(l, r)
    return t


def norm(x):
    if isinstance(x, Term):
        return norm_emb(x)
    if isinstance(x, Crit):
        return Crit(norm_emb(x.emb))
    if isinstance(x, AppO):
        e, a = norm_emb(x.emb), norm(x.arg)
        return a if e is ID else AppO(e, a)
    if isinstance(x, SupBelow):
        e, a = norm_emb(x.emb), norm(x.arg)
        return a if e is ID else SupBelow(e, a)
    if isinstance(x, (Const, OVar)):
        return x
    if isinstance(x, EquivAt):
        return EquivAt(norm_emb(x.lhs), norm_emb(x.rhs), norm(x.level))
    if isinstance(x, (EqO, LtO, LeO, EqE)):
        return type(x)(norm(x.lhs), norm(x.rhs))
    raise TypeError(f"cannot normalise {x!r}")


# ---------------------------------------------------------------- traversal helpers

def children(x) -> tuple:
    if isinstance(x, (Apply, Compose)):
        return (x.left, x.right)
    if isinstance(x, Crit):
        return (x.emb,)
    if isinstance(x, (AppO, SupBelow)):
        return (x.emb, x.arg)
    if isinstance(x, EquivAt):
        return (x.lhs, x.rhs, x.level)
    if isinstance(x, (EqO, LtO, LeO, EqE)):
        return (x.lhs, x.rhs)
    return ()


def rebuild(x, kids: tuple):
    if isinstance(x, Apply):
        return Apply(*kids)
    if isinstance(x, Compose):
        return Compose(*kids)
    if isinstance(x, Crit):
        return Crit(*kids)
    if isinstance(x, (AppO, SupBelow, EquivAt, EqO, LtO, LeO, EqE)):
        return type(x)(*kids)
    return x


def subst_vars(x, mapping: dict):
    """Replace variables (``Var`` / ``OVar``) by the mapped expressions."""
    if isinstance(x, Var) or isinstance(x, OVar):
        return mapping.get(x.name, x)
    kids = children(x)
    if not kids:
        return x
    new = tuple(subst_vars(k, mapping) for k in kids)
    if all(a is b or a == b for a, b in zip(new, kids)):
        return x
    return norm(rebuild(x, new))


def free_vars(x) -> set[str]:
    if isinstance(x, (Var, OVar)):
        return {x.name}
    out: set[str] = set()
    for k in children(x):
        out |= free_vars(k)
    return out


def ordinals_in(x) -> list:
    """Every ordinal subexpression, outermost first."""
    out = []
    if isinstance(x, ORD_TYPES):
        out.append(x)
    for k in children(x):
        if not isinstance(k, Term):
            out.extend(ordinals_in(k))
    return out


def transport(e: Term, x):
    """Apply the embedding ``e`` to a whole expression or relation.

    Elementarity: ordinals ``a`` map to ``e(a)`` pushed inside, embeddings
    ``f`` map to ``e(f)`` (distributing over composition), and every relation
    is preserved, with ``~[b]`` becoming ``~[e(b)]``."""
    if isinstance(x, Term):
        if x is ID:
            return ID
        if isinstance(x, Compose):
            return Compose(transport(e, x.left), transport(e, x.right))
        return norm_emb(Apply(e, x))
    if isinstance(x, (Const, OVar)):
        return AppO(e, x)
    if isinstance(x, Crit):
        return Crit(transport(e, x.emb))
    if isinstance(x, AppO):
        return norm(AppO(transport(e, x.emb), transport(e, x.arg)))
    if isinstance(x, SupBelow):
        return norm(SupBelow(transport(e, x.emb), transport(e, x.arg)))
    if isinstance(x, EquivAt):
        return EquivAt(transport(e, x.lhs), transport(e, x.rhs), transport(e, x.level))
    if isinstance(x, (EqO, LtO, LeO, EqE)):
        return type(x)(transport(e, x.lhs), transport(e, x.rhs))
    raise TypeError(f"cannot transport {x!r}")


# ---------------------------------------------------------------- parsing

class _SupArg:
    __slots__ = ("ord",)

    def __init__(self, o):
        self.ord = o


class CalcParser(TermParser):
    """Term parser extended with ordinal atoms; one expression may be either
    an embedding or an ordinal, decided by its shape."""

    def __init__(self, tok: Tokenizer, names: NameTable | None = None,
                 emb_vars=frozenset(), ord_vars=frozenset()):
        super().__init__(tok, names, variables=set(emb_vars), allow_id=True)
        self.ord_vars = set(ord_vars)

    def starts_atom(self) -> bool:
        kind, v, _ = self.tok.peek()
        if kind == "jn" or v == "(":
            return True
        return kind == "ident" and v != "o"

    def parse_mixed(self):
        x = self.parse_mixed_app()
        while self.tok.at("o") and self.tok.peek()[0] == "ident":
            _, _, pos = self.tok.next()
            y = self.parse_mixed_app()
            if not isinstance(x, Term) or not isinstance(y, Term):
                raise ParseError("composition needs embeddings on both sides", pos, self.tok.text)
            x = Compose(x, y)
        return x

    def parse_mixed_app(self):
        kind, v, pos = self.tok.peek()
        if not self.starts_atom():
            raise self.error(f"expected an expression, found {v or 'end of input'!r}", pos)
        atoms = []
        while self.starts_atom():
            atoms.append((self.tok.peek()[2], self.parse_mixed_atom()))
        *init, (lpos, last) = atoms
        for p, a in init:
            if not isinstance(a, Term):
                raise ParseError("an ordinal can only be the final argument", p, self.tok.text)
        if isinstance(last, _SupArg):
            if not init:
                raise ParseError("'(<...)' needs an embedding in front", lpos, self.tok.text)
            return SupBelow(_chain([a for _, a in init]), last.ord)
        if isinstance(last, Term):
            return _chain([a for _, a in init] + [last])
        if not init:
            return last
        return AppO(_chain([a for _, a in init]), last)

    def parse_mixed_atom(self):
        kind, v, pos = self.tok.peek()
        if kind == "ident" and v == "crit":
            self.tok.next()
            self.tok.expect("(")
            e = self.parse_mixed()
            if not isinstance(e, Term):
                raise ParseError("crit(...) takes an embedding", pos, self.tok.text)
            self.tok.expect(")")
            return Crit(e)
        if kind == "ident" and v in ORD_CONSTS:
            self.tok.next()
            c = Const(v)
            if self.tok.at("^"):
                self.tok.next()
                k, num, npos = self.tok.next()
                if k != "num" or int(num) < 1:
                    raise ParseError("expected a positive index after '^'", npos, self.tok.text)
                return AppO(j_sub(int(num)), c)
            return c
        if kind == "ident" and v in self.ord_vars:
            self.tok.next()
            return OVar(v)
        if v == "(":
            self.tok.next()
            if self.tok.at("<"):
                self.tok.next()
                o = self.parse_mixed()
                if isinstance(o, Term):
                    raise ParseError("'(<...)' takes an ordinal", pos, self.tok.text)
                self.tok.expect(")")
                return _SupArg(o)
            x = self.parse_mixed()
            self.tok.expect(")")
            return x
        return self.parse_atom()


def _chain(ts: list[Term]) -> Term:
    t = ts[0]
    for a in ts[1:]:
        t = Apply(t, a)
    return t


_REL_OPS = ("=", "<", "<=", ">", ">=")


def parse_relation(text: str, names: NameTable | None = None,
                   emb_vars=frozenset(), ord_vars=frozenset()) -> Rel:
    tok = Tokenizer(text)
    p = CalcParser(tok, names or PRELUDE_NAMES, emb_vars, ord_vars)
    lhs = p.parse_mixed()
    kind, op, pos = tok.next()
    if op == "~[":
        level = p.parse_mixed()
        tok.expect("]")
        rhs = p.parse_mixed()
        if not (isinstance(lhs, Term) and isinstance(rhs, Term)) or isinstance(level, Term):
            raise ParseError("'E ~[O] F' needs embeddings around an ordinal level", pos, text)
        rel = EquivAt(lhs, rhs, level)
    elif op in _REL_OPS and kind == "op":
        rhs = p.parse_mixed()
        both_emb = isinstance(lhs, Term) and isinstance(rhs, Term)
        both_ord = not isinstance(lhs, Term) and not isinstance(rhs, Term)
        if op == "=" and both_emb:
            rel = EqE(lhs, rhs)
        elif both_ord:
            rel = {"=": lambda: EqO(lhs, rhs), "<": lambda: LtO(lhs, rhs),
                   "<=": lambda: LeO(lhs, rhs), ">": lambda: LtO(rhs, lhs),
                   ">=": lambda: LeO(rhs, lhs)}[op]()
        else:
            raise ParseError(f"'{op}' cannot relate these sides", pos, text)
    else:
        raise ParseError(f"expected a relation operator, found {op or 'end of input'!r}", pos, text)
    k, v, pos = tok.peek()
    if k != "eof":
        raise ParseError(f"trailing input {v!r}", pos, text)
    return norm(rel)


def parse_expr(text: str, names: NameTable | None = None,
               emb_vars=frozenset(), ord_vars=frozenset()):
    """An embedding or an ordinal."""
    tok = Tokenizer(text)
    p = CalcParser(tok, names or PRELUDE_NAMES, emb_vars, ord_vars)
    x = p.parse_mixed()
    k, v, pos = tok.peek()
    if k != "eof":
        raise ParseError(f"trailing input {v!r}", pos, text)
    return norm(x)


def parse_ord(text: str, **kw) -> Ord:
    x = parse_expr(text, **kw)
    if isinstance(x, Term):
        raise ParseError(f"{text!r} is an embedding, expected an ordinal")
    return x
