"""Deciding inequalities between bound expressions with a small lemma library.

Every verdict carries the list of lemma applications that justify it."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import (
    DEFAULT_BUDGET_BITS,
    CT_INITIAL,
    POW_COLUMNS,
    Overflow,
    ct_exact,
    f_exact,
    _pow2,
)
from .expr import (
    Add,
    BoundExpr,
    CtApp,
    CtChain,
    Diff,
    FApp,
    Num,
    Plus,
    Pow2,
    Var,
    plus,
    render,
    split,
)

# numeric lower bounds are capped at 2^LOWER_CAP_BITS
LOWER_CAP_BITS = 4096
_CAP = 1 << LOWER_CAP_BITS


# ------------------------------------------------------------ normalisation

def normalize(e: BoundExpr, budget: int = DEFAULT_BUDGET_BITS) -> BoundExpr:
    """Unfold chains, rewrite power columns and F_0..F_3 to closed forms, and
    evaluate whatever fits in the budget."""
    if isinstance(e, (Num, Var)):
        return e
    if isinstance(e, Plus):
        return plus(normalize(e.expr, budget), e.c)
    if isinstance(e, CtChain):
        x = normalize(e.arg, budget)
        for col in range(e.m - 1, e.n - 1, -1):
            x = _norm_ct(col, x, budget)
        return x
    if isinstance(e, CtApp):
        return _norm_ct(e.n, normalize(e.arg, budget), budget)
    if isinstance(e, FApp):
        return _norm_f(e.k, normalize(e.arg, budget), budget)
    if isinstance(e, Pow2):
        return _norm_pow(normalize(e.arg, budget), budget)
    if isinstance(e, Add):
        a, b = normalize(e.left, budget), normalize(e.right, budget)
        ra, ca = split(a)
        rb, cb = split(b)
        if ra is None:
            return plus(b, ca)
        if rb is None:
            return plus(a, cb)
        return plus(Add(ra, rb), ca + cb)
    if isinstance(e, Diff):
        a, b = normalize(e.left, budget), normalize(e.right, budget)
        rb, cb = split(b)
        if rb is None:
            return plus(a, -cb)
        ra, ca = split(a)
        if ra is None:
            return plus(Diff(Num(0), rb), ca - cb)
        return plus(Diff(ra, rb), ca - cb)
    raise TypeError(e)


def _norm_pow(x: BoundExpr, budget: int) -> BoundExpr:
    if isinstance(x, Num) and x.value >= 0:
        try:
            return Num(_pow2(x.value, budget))
        except Overflow:
            pass
    return Pow2(x)


def _norm_ct(n: int, x: BoundExpr, budget: int) -> BoundExpr:
    if n in POW_COLUMNS:
        return _norm_pow(x, budget)
    if isinstance(x, Num) and x.value >= 0:
        try:
            return Num(ct_exact(n, x.value, budget))
        except Overflow:
            pass
    return CtApp(n, x)


def _norm_f(k: int, x: BoundExpr, budget: int) -> BoundExpr:
    if isinstance(x, Num) and x.value >= 0:
        try:
            return Num(f_exact(k, x.value, budget))
        except Overflow:
            pass
    if k == 0:
        return plus(x, 1)
    if k == 1:
        return plus(x, 2)
    if k == 3:
        return plus(_norm_pow(plus(x, 3), budget), -3)
    return FApp(k, x)


def ct_step(n: int, prev: BoundExpr) -> BoundExpr:
    """``Ct_n(m + 1)`` in terms of ``prev = Ct_n(m)``, for the recursive columns
    (columns 4 and 5 need m >= 1, column 9 needs m >= 1)."""
    if n == 2:
        return Add(prev, Pow2(prev))
    if n == 4:
        return Add(prev, plus(CtChain(1, 4, prev), -1))
    if n == 5:
        return Add(prev, CtChain(3, 5, prev))
    if n == 7:
        return Add(prev, plus(CtChain(1, 7, prev), -8))
    if n == 9:
        return Diff(Add(prev, CtChain(1, 9, prev)), CtChain(1, 6, Num(1)))
    if n == 10:
        return Add(prev, CtChain(3, 10, prev))
    raise ValueError(f"column {n} has no recursion")


# least m for which ct_step(n, Ct_n(m)) gives Ct_n(m + 1)
STEP_FROM = {2: 0, 4: 1, 5: 1, 7: 0, 9: 1, 10: 0}


def ct_initial(n: int, m: int) -> BoundExpr:
    """The closed initial values below STEP_FROM."""
    if n in CT_INITIAL and m == 1:
        return Num(CT_INITIAL[n])
    if n == 9 and m == 1:
        return plus(CtChain(1, 9, plus(CtChain(1, 6, Num(1)), -8)), -8)
    if m == 0:
        return Num(0)
    raise ValueError((n, m))


def lower_value(e: BoundExpr) -> int | None:
    """A guaranteed lower bound, capped near 2^LOWER_CAP_BITS; None if unknown."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return e.least
    if isinstance(e, Plus):
        v = lower_value(e.expr)
        return None if v is None else v + e.c
    if isinstance(e, Add):
        a, b = lower_value(e.left), lower_value(e.right)
        return None if a is None or b is None else a + b
    if isinstance(e, Pow2):
        v = lower_value(e.arg)
        return 1 if v is None or v < 0 else 1 << min(v, LOWER_CAP_BITS)
    if isinstance(e, FApp):
        v = max(lower_value(e.arg) or 0, 0)
        try:
            return f_exact(e.k, v, LOWER_CAP_BITS)
        except Overflow:
            return _CAP
    if isinstance(e, CtApp):
        v = max(lower_value(e.arg) or 0, 0)
        try:
            return ct_exact(e.n, v, LOWER_CAP_BITS)
        except Overflow:
            # column 9 subtracts a large term, so fall back to Ct_9(x) >= x
            return v if e.n == 9 else _CAP >> 1
    if isinstance(e, CtChain):
        return lower_value(normalize(e))
    return None


# ------------------------------------------------------------------ lemmas

@dataclass(frozen=True)
class GrowthLemma:
    """``Ct_n(m + shift) >= F_k(m - lag) + c`` for every m >= lag
    (equality when ``exact``)."""
    name: str
    n: int
    shift: int
    k: int
    lag: int
    c: int
    exact: bool = False

    def statement(self) -> str:
        lhs = f"Ct[{self.n}](m + {self.shift})" if self.shift else f"Ct[{self.n}](m)"
        arg = f"m - {self.lag}" if self.lag else "m"
        rel = "=" if self.exact else ">="
        return f"{lhs} {rel} F[{self.k}]({arg}) + {self.c} for m >= {self.lag}"


@dataclass(frozen=True)
class Hypothesis:
    """``atom >= lower`` available as a rewrite."""
    atom: BoundExpr
    lower: BoundExpr
    label: str


VERDICTS = ("ProvenLT", "ProvenLE", "ProvenEQ", "ProvenGE", "ProvenGT", "Unknown")


@dataclass
class Verdict:
    kind: str
    trace: list[str] = field(default_factory=list)

    @property
    def proven(self) -> bool:
        return self.kind != "Unknown"

    def to_dict(self) -> dict:
        return {"verdict": self.kind, "trace": list(self.trace)}


def _same_head(a: BoundExpr, b: BoundExpr) -> str | None:
    if isinstance(a, FApp) and isinstance(b, FApp) and a.k == b.k:
        return f"F[{a.k}]"
    if isinstance(a, CtApp) and isinstance(b, CtApp) and a.n == b.n:
        return f"Ct[{a.n}]"
    if isinstance(a, Pow2) and isinstance(b, Pow2):
        return "2^x"
    return None


class _L:
    """A trace line, rendered only if the proof that contains it succeeds."""
    __slots__ = ("fmt", "args")

    def __init__(self, fmt: str, *args):
        self.fmt = fmt
        self.args = args

    def __str__(self) -> str:
        return self.fmt.format(*(render(a) if isinstance(a, BoundExpr) else a for a in self.args))


def _rel(strict: bool) -> str:
    return ">" if strict else ">="


class Prover:
    """Depth-bounded search for ``a > b`` or ``a >= b``.

    Rules: exact comparison, capped numeric lower bounds, strict monotonicity
    of every F_k, Ct_n and 2^x (``h(x + t) >= h(x) + t``), ``2^x > x``,
    ``F_k(x) > x``, ``Ct_n(x) >= x``, ``F_{k+1}(x) > F_k(x)``, the recursion of
    F and of each Ct column, dropping a summand, the supplied growth lemmas
    and hypotheses."""

    def __init__(self, lemmas=(), hypotheses=(), *, budget: int = DEFAULT_BUDGET_BITS,
                 max_depth: int = 14, max_nodes: int = 10_000):
        self.lemmas = list(lemmas)
        self.max_nodes = max_nodes
        self._nodes = 0
        self.hyps = list(hypotheses)
        self.budget = budget
        self.max_depth = max_depth
        self._failed: dict = {}

    def norm(self, e: BoundExpr) -> BoundExpr:
        return normalize(e, self.budget)

    def prove(self, a: BoundExpr, b: BoundExpr, strict: bool) -> list[str] | None:
        a, b = self.norm(a), self.norm(b)
        self._nodes = 0
        for depth in range(1, self.max_depth + 1):
            if self._nodes > self.max_nodes:
                return None
            r = self._search(a, b, strict, depth)
            if r is not None:
                return [str(line) for line in r]
        return None

    # -- search
    def _search(self, a, b, strict, depth):
        key = (a, b, strict)
        if self._failed.get(key, -1) >= depth:
            return None
        self._nodes += 1
        if self._nodes > self.max_nodes:
            return None
        r = self._try(a, b, strict, depth)
        if r is None and self._nodes <= self.max_nodes:
            self._failed[key] = depth
        return r

    def _side(self, x: BoundExpr, least: int, depth: int) -> list[str] | None:
        """Proof of ``x >= least``."""
        v = lower_value(x)
        if v is not None and v >= least:
            return []
        return self._search(x, Num(least), False, depth - 1) if depth > 1 else None

    def _try(self, a, b, strict, depth):
        ra, ca = split(a)
        rb, cb = split(b)
        rel = _rel(strict)
        if ra is None and rb is None:
            ok = ca > cb if strict else ca >= cb
            return [_L("{} {} {}: exact integers", a, rel, b)] if ok else None
        if ra is not None and ra == rb:
            ok = ca > cb if strict else ca >= cb
            return [_L("{} {} {}: same term, compare constants", a, rel, b)] if ok else None
        if rb is None:
            v = lower_value(a)
            if v is not None and (v > cb if strict else v >= cb):
                return [_L("{} {} {}: monotone lower evaluation gives at least {}", a, rel, b, _num(v))]
        if ra is None or depth <= 0:
            return None
        head = _same_head(ra, rb)
        if head is not None:
            t = max(0, cb - ca + (1 if strict else 0))
            sub = self._search(ra.arg, plus(rb.arg, t), False, depth - 1)
            if sub is not None:
                return sub + [_L("{} {} {}: strict monotonicity of {}", a, rel, b, head)]
        for a2, gain, lines in self._lower(ra, depth):
            sub = self._search(plus(a2, ca), b, strict and not gain, depth - 1)
            if sub is not None:
                return lines + sub + [_L("{} {} {}: from {} {} {}", a, rel, b, ra, _rel(gain), a2)]
        if rb is not None:
            for b2, lines in self._equal(rb, depth):
                sub = self._search(a, plus(b2, cb), strict, depth - 1)
                if sub is not None:
                    return lines + sub + [_L("{} {} {}: rewriting {} = {}", a, rel, b, rb, b2)]
        return None

    # -- rewrites
    def _lower(self, x: BoundExpr, depth: int):
        """Yield ``(y, strict, lines)`` with ``x >= y`` (``x > y`` when strict)."""
        for h in self.hyps:
            if h.atom == x:
                yield self.norm(h.lower), False, [_L("{} >= {}: {}", x, h.lower, h.label)]
        if isinstance(x, Add):
            for keep, drop in ((x.right, x.left), (x.left, x.right)):
                v = lower_value(drop)
                if v is not None and v >= 0:
                    yield plus(keep, v), False, [_L("{} >= {}: monotone lower evaluation", drop, _num(v))]
        if isinstance(x, CtApp):
            for y, lines in self._ct_unfold(x, depth):
                yield y, False, lines
            for lem in self.lemmas:
                if lem.n != x.n:
                    continue
                side = self._side(x.arg, lem.shift + lem.lag, depth)
                if side is None:
                    continue
                y = self.norm(plus(FApp(lem.k, plus(x.arg, -lem.shift - lem.lag)), lem.c))
                yield y, False, side + [_L("{} >= {}: {} ({})", x, y, lem.name, lem.statement())]
            yield x.arg, False, [_L("{} >= {}: Ct[n](0) = 0 and Ct[n] strictly increasing", x, x.arg)]
        if isinstance(x, Pow2):
            yield plus(x.arg, 1), False, [_L("{} > {}: 2^x > x", x, x.arg)]
        if isinstance(x, FApp):
            for y, lines in self._f_unfold(x, depth):
                yield y, False, lines
            if x.k >= 3:
                y = self.norm(FApp(x.k - 1, x.arg))
                yield y, True, [_L("{} > {}: F[k+1](x) > F[k](x)", x, y)]
            yield plus(x.arg, 1), False, [_L("{} > {}: F[k](x) > x", x, x.arg)]

    def _equal(self, x: BoundExpr, depth: int):
        if isinstance(x, FApp):
            yield from self._f_unfold(x, depth)
        if isinstance(x, CtApp):
            yield from self._ct_unfold(x, depth)

    def _f_unfold(self, x: FApp, depth: int):
        if x.k == 0:
            return
        if x.arg == Num(0):
            y = self.norm(FApp(x.k - 1, Num(1)))
            yield y, [_L("{} = {}: F[k+1](0) = F[k](1)", x, y)]
            return
        side = self._side(x.arg, 1, depth)
        if side is None:
            return
        y = self.norm(FApp(x.k - 1, FApp(x.k, plus(x.arg, -1))))
        yield y, side + [_L("{} = {}: F[k+1](m+1) = F[k](F[k+1](m))", x, y)]

    def _ct_unfold(self, x: CtApp, depth: int):
        n = x.n
        if n not in STEP_FROM:
            return
        arg = x.arg
        if isinstance(arg, Num):
            m = arg.value
            if m <= STEP_FROM[n]:
                y = self.norm(ct_initial(n, m))
            else:
                y = self.norm(ct_step(n, CtApp(n, Num(m - 1))))
            yield y, [_L("{} = {}: recursion of Ct[{}]", x, y, n)]
            return
        side = self._side(arg, STEP_FROM[n] + 1, depth)
        if side is None:
            return
        y = self.norm(ct_step(n, CtApp(n, plus(arg, -1))))
        yield y, side + [_L("{} = {}: recursion of Ct[{}]", x, y, n)]


def _num(v: int) -> str:
    return str(v) if v.bit_length() <= 64 else f"2^{v.bit_length() - 1}"


def bound_compare(a: BoundExpr, b: BoundExpr, *, lemmas=None,
                  budget: int = DEFAULT_BUDGET_BITS, max_depth: int = 14,
                  max_nodes: int = 10_000) -> Verdict:
    """The strongest of EQ, GT, LT, GE, LE that the lemma library proves."""
    if lemmas is None:
        from .lemmas import library
        lemmas = library()
    pr = Prover(lemmas, budget=budget, max_depth=max_depth, max_nodes=max_nodes)
    na, nb = pr.norm(a), pr.norm(b)
    head = [f"normal forms: {render(na)} vs {render(nb)}"]
    if na == nb:
        return Verdict("ProvenEQ", head + ["identical normal forms"])
    if isinstance(na, Num) and isinstance(nb, Num):
        kind = "ProvenEQ" if na.value == nb.value else ("ProvenGT" if na.value > nb.value else "ProvenLT")
        return Verdict(kind, head + ["exact integers"])
    t = pr.prove(na, nb, True)
    if t is not None:
        return Verdict("ProvenGT", head + t)
    t = pr.prove(nb, na, True)
    if t is not None:
        return Verdict("ProvenLT", head + t)
    ge = pr.prove(na, nb, False)
    le = pr.prove(nb, na, False)
    if ge is not None and le is not None:
        return Verdict("ProvenEQ", head + ge + le)
    if ge is not None:
        return Verdict("ProvenGE", head + ge)
    if le is not None:
        return Verdict("ProvenLE", head + le)
    return Verdict("Unknown", head)
