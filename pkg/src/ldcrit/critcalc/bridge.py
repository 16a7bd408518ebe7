"""Cross-checks between proven facts and the finite tables ``A_n``.

A named ordinal built from constants, ``crit`` and application is the
critical point of a concrete term (``e(crit w) = crit(e(w))``), so its index
among ``gamma_0 < gamma_1 < ...`` can be read off the tables.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from ..laver import CritIndex, UnevaluableTerm, crit_index, eval_term
from ..term import Apply, Compose, Term, Var
from .checker import FactStore
from .errors import BridgeViolation
from .syntax import AppO, Const, Crit, EqO, EquivAt, LeO, LtO, parse_relation
from .jn_values import CRIT_SEQ, cells


def _has_var(t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            return True
        if isinstance(u, (Apply, Compose)):
            stack += [u.left, u.right]
    return False


def witness(o, defs: dict) -> Term | None:
    """A term whose critical point is ``o``, or None for ordinals outside the
    ``crit``/application fragment (strict suprema, variables)."""
    if isinstance(o, Const):
        d = defs.get(o.name)
        return None if d is None else witness(d, defs)
    if isinstance(o, Crit):
        return None if _has_var(o.emb) else o.emb
    if isinstance(o, AppO):
        w = witness(o.arg, defs)
        return None if w is None or _has_var(o.emb) else Apply(o.emb, w)
    return None


class IndexOracle:
    """Memoised table indices of ordinals; ``max_n`` bounds the tables read
    (``A_0..A_{max_n+1}``)."""

    def __init__(self, store: FactStore, max_n: int):
        self.store = store
        self.max_n = max_n
        self.defs = store.definitions()
        self._memo: dict = {}
        self._pred: dict | None = None

    def index(self, o) -> CritIndex | None:
        if o not in self._memo:
            w = witness(o, self.defs)
            try:
                self._memo[o] = None if w is None else crit_index(w, self.max_n)
            except UnevaluableTerm:
                self._memo[o] = None
        return self._memo[o]

    def lower_bound(self, o) -> int:
        """Largest m with ``gamma_m <= o`` known, from the tables or from a
        proven comparison with an ordinal whose index is known."""
        ix = self.index(o)
        if ix is not None:
            return ix.value
        if self._pred is None:
            self._pred = defaultdict(set)
            for a, nbrs in self.store.graph.succ.items():
                for b in nbrs:
                    self._pred[b].add(a)
        best, seen, todo = 0, {o}, [o]
        while todo:
            x = todo.pop()
            ix = self.index(x)
            if ix is not None and ix.value > best:
                best = ix.value
            for y in self._pred.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return best


# ---------------------------------------------------------------- value table

@dataclass
class CellResult:
    row: int
    cell: str
    relation: str
    status: str                  # pass | fail | undischarged
    fact: str | None = None      # discharging script fact
    numeric: str | None = None   # index agreement witness

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class JnValuesReport:
    cells: list[CellResult]

    @property
    def undischarged(self) -> list[CellResult]:
        return [c for c in self.cells if c.status != "pass"]

    @property
    def ok(self) -> bool:
        return not self.undischarged

    def to_dict(self) -> dict:
        return {"ok": self.ok, "cells": [c.to_dict() for c in self.cells],
                "undischarged": [f"row{c.row:02d}.{c.cell}" for c in self.undischarged]}


def _numeric(rel, oracle: IndexOracle) -> tuple[str | None, bool]:
    """(witness text, consistent) for an equation between table-indexable sides."""
    if not isinstance(rel, EqO):
        return None, True
    a, b = oracle.index(rel.lhs), oracle.index(rel.rhs)
    if a is None or b is None or not (a.exact and b.exact):
        return None, True
    return f"both gamma_{a.value}" if a == b else f"{a} vs {b}", a == b


def verify_jn_values(store: FactStore, max_n: int = 10, rows=None) -> JnValuesReport:
    """Discharge every cell of the value table by a proven fact in ``store``
    or, for equations between critical points of index <= ``max_n``, by
    agreement of table indices.  Cells discharged by neither are listed."""
    oracle = IndexOracle(store, max_n)
    out = []
    for n in rows or sorted(CRIT_SEQ):
        for cid, text in cells(n):
            rel = parse_relation(text, store.names)
            f = store.find(rel)
            num, consistent = _numeric(rel, oracle)
            if not consistent:
                status = "fail"
            elif f is not None or num is not None:
                status = "pass"
            else:
                status = "undischarged"
            out.append(CellResult(n, cid, text, status, f.id if f else None, num))
    return JnValuesReport(out)


# ---------------------------------------------------------------- audit

@dataclass
class BridgeReport:
    max_n: int
    equiv_checked: int = 0
    order_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return dict(self.__dict__, ok=self.ok)


def audit_relation(rel, oracle: IndexOracle, label: str = "") -> tuple[bool, str | None]:
    """(checked, violation message) for one relation."""
    max_n = oracle.max_n
    if isinstance(rel, EquivAt):
        if _has_var(rel.lhs) or _has_var(rel.rhs):
            return False, None
        m = min(oracle.lower_bound(rel.level), max_n)
        if m < 1:
            return False, None
        for n in range(m + 1):
            try:
                a, b = eval_term(rel.lhs, n), eval_term(rel.rhs, n)
            except UnevaluableTerm:
                return False, None
            if a != b:
                return True, (f"{label}{rel}: images differ at n = {n} ({a} vs {b}) although "
                              f"the level is at least gamma_{m}")
        return True, None
    if isinstance(rel, (LtO, LeO, EqO)):
        a, b = oracle.index(rel.lhs), oracle.index(rel.rhs)
        if a is None or b is None:
            return False, None
        if a.exact and b.exact:
            bad = {LtO: a.value >= b.value, LeO: a.value > b.value, EqO: a.value != b.value}[type(rel)]
        elif b.exact:
            bad = True                   # lhs beyond the tables, rhs inside
        elif a.exact:
            bad = isinstance(rel, EqO)
        else:
            return False, None
        return True, (f"{label}{rel}: table indices {a} and {b}" if bad else None)
    return False, None


def bridge_audit(store: FactStore, max_n: int = 8, *, extra=(), fatal: bool = True) -> BridgeReport:
    """Check every unconditional fact of ``store`` (and ``extra`` relations)
    against the tables.  With ``fatal`` the first discrepancy raises
    :class:`BridgeViolation`."""
    oracle = IndexOracle(store, max_n)
    report = BridgeReport(max_n)
    items = [(f.id + ": ", f.rel) for f in store.facts.values() if not f.conditional]
    items += [("", r) for r in extra]
    for label, rel in items:
        checked, msg = audit_relation(rel, oracle, label)
        if checked:
            if isinstance(rel, EquivAt):
                report.equiv_checked += 1
            else:
                report.order_checked += 1
        if msg:
            if fatal:
                raise BridgeViolation(msg)
            report.violations.append(msg)
    return report
