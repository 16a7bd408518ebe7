"""Identities of the grid and their cross-checks against the tables, the
fact store and the growth recursions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .. import growth
from ..critcalc.order import Order
from ..critcalc.syntax import AppO, Const, EqO, parse_ord
from ..laver import CritIndex
from ..term import Apply, render_term
from .grid import (
    DOUBLING, K, K2, NCOLS, SAT, SIDE_CONDITIONS, GridState, check_side_conditions, produced,
)

SCHEMA_VERSION = 1

# first block index m for which a(n, Ct_n(m)) = a(n + 1, m) is recorded.
# Column 4 starts at a(4,0) = kappa3 and meets column 5 one step late
# (a(4,1) = a(5,0), a seed identity); the first blocks of columns 9 and 10
# are anchored by the xi side condition instead.
BOUNDARY_FROM = {n: 0 for n in range(9)} | {4: 1}


@dataclass
class Identity:
    kind: str                 # crit-seq | boundary | seed
    lhs: object
    rhs: object
    where: tuple[int, int]    # (column, index) the identity is attached to
    status: str = "recorded"  # syntactic | corpus | numeric | recorded | conflict
    detail: str = ""

    def text(self) -> str:
        return f"{self.lhs} = {self.rhs}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "relation": self.text(), "status": self.status,
                "detail": self.detail}


@dataclass
class Check:
    id: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"id": self.id, "status": "pass" if self.ok else "fail", "detail": self.detail}


@dataclass
class AuditReport:
    checks: list[Check] = field(default_factory=list)
    identities: list[Identity] = field(default_factory=list)

    @property
    def conflicts(self) -> list[Identity]:
        return [i for i in self.identities if i.status == "conflict"]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and not self.conflicts

    def add(self, cid: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(cid, ok, detail))

    def to_dict(self) -> dict:
        tally: dict[str, int] = {}
        for i in self.identities:
            tally[i.status] = tally.get(i.status, 0) + 1
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks],
                "identities": tally,
                "conflicts": [i.to_dict() for i in self.conflicts]}


def _o(text: str):
    return parse_ord(text)


def named_identities(state: GridState) -> list[tuple[int, int, object]]:
    """Known values of early labels ``a(n, i)``, restricted to the grid."""
    want = [
        (0, 0, "kappa0"), (1, 0, "kappa1"), (1, 1, "kappa2"), (2, 0, "kappa2"),
        (3, 0, "kappa2"), (4, 0, "kappa3"), (5, 0, "mu"), (6, 0, "mu"), (6, 1, "nu"),
        (7, 0, "nu"), (8, 0, "nu"), (8, 1, "xi"), (9, 0, "xi"), (1, 8, "mu"),
    ]
    out = [(n, i, _o(t)) for n, i, t in want]
    out.append((5, 1, AppO(K, _o("kappa3"))))
    out.append((10, 0, AppO(Apply(K2, K), _o("kappa2"))))
    out.append((11, 0, AppO(K2, _o("mu"))))
    out.append((4, 1, state.label(5, 0)))
    return [(n, i, v) for n, i, v in out if i <= state.length(n)]


def _settle(ident: Identity, store, oracle) -> None:
    a, b = ident.lhs, ident.rhs
    if a == b:
        ident.status = "syntactic"
        return
    ia, ib = oracle.index(a), oracle.index(b)
    if ia is not None and ib is not None:
        clash = _clash(ia, ib)
        if clash:
            ident.status, ident.detail = "conflict", clash
            return
    if store.find(EqO(a, b)) is not None or store.derive_order(a, b) == Order.EQ:
        ident.status = "corpus"
        return
    order = store.derive_order(a, b)
    if order in (Order.LT, Order.GT):
        ident.status, ident.detail = "conflict", f"fact store derives {order.name}"
        return
    if ia is not None and ib is not None and ia.exact and ib.exact:
        ident.status, ident.detail = "numeric", f"both are {ia}"


def _clash(a: CritIndex, b: CritIndex) -> str | None:
    if a.exact and b.exact and a.value != b.value:
        return f"table indices differ: {a} vs {b}"
    if a.exact and not b.exact and a.value < b.value:
        return f"{a} but the other side is {b}"
    if b.exact and not a.exact and b.value < a.value:
        return f"{b} but the other side is {a}"
    return None


def grid_identities(state: GridState) -> list[Identity]:
    lz = state.lazy
    out = []
    for n in range(NCOLS):
        for i in range(state.length(n)):
            e = state.columns[n][i].term
            out.append(Identity("crit-seq", AppO(e, lz.label(n, i)), lz.label(n, i + 1), (n, i)))
    for n, first in BOUNDARY_FROM.items():
        starts = lz.starts(n, state.length(n))
        for m, s in enumerate(starts):
            if s > state.length(n) or m > state.length(n + 1):
                break
            if m < first:
                continue          # anchored first block
            out.append(Identity("boundary", lz.label(n, s), lz.label(n + 1, m), (n, s)))
    for n, i, v in named_identities(state):
        out.append(Identity("seed", lz.label(n, i), v, (n, i)))
    return out


def _ct_value(n: int, m: int, budget: int):
    v = growth.Ct(n, m, budget)
    return None if growth.is_symbolic(v) else v


def _count_checks(state: GridState, rep: AuditReport, budget: int) -> None:
    for n in range(NCOLS - 1):
        c = state.consumed[n]
        ln, cap = state.length(n), state.caps[n]
        law = _ct_value(n, c, budget)
        want = cap if law is None else min(cap, law)
        rep.add(f"count.col{n}", ln == want,
                f"{ln} entries from {c} consumed; law gives min({cap}, Ct_{n}({c}) = "
                f"{law if law is not None else 'beyond budget'})")
        # operational block starts against the recursion
        bad = []
        for m in range(c + 1):
            op = produced(n, m)
            ct = _ct_value(n, m, budget)
            if (ct is None and op < SAT) or (ct is not None and op != min(ct, SAT)):
                bad.append(f"m={m}: simulated {op if op < SAT else 'huge'} vs Ct {ct if ct is not None else 'huge'}")
        rep.add(f"blocks.col{n}", not bad, "; ".join(bad))
    # column 11 carries no count law; it is k'' applied to column 6
    ok = all(e.term == Apply(K2, state.lazy.term(6, e.index)) for e in state.columns[11])
    rep.add("col11.k''-of-col6", ok, f"{state.length(11)} entries, reported raw")


def _order_checks(state: GridState, rep: AuditReport, store, oracle) -> None:
    lz = state.lazy
    for n in range(NCOLS):
        labs = [lz.label(n, i) for i in range(state.length(n) + 1)]
        bad = []
        for i in range(len(labs) - 1):
            a, b = oracle.index(labs[i]), oracle.index(labs[i + 1])
            if a is not None and b is not None and a.exact and b.exact and not a.value < b.value:
                bad.append(f"a({n},{i}) = {a} not below a({n},{i + 1}) = {b}")
            elif a is not None and b is not None and a.exact is False and b.exact and b.value <= a.value:
                bad.append(f"a({n},{i}) {a} vs a({n},{i + 1}) = {b}")
            if store.derive_order(labs[i], labs[i + 1]) in (Order.GT, Order.EQ):
                bad.append(f"fact store orders a({n},{i}) >= a({n},{i + 1})")
        rep.add(f"order.col{n}", not bad, "; ".join(bad))
    # column 1 starts at gamma_1 < gamma_2 and keeps climbing
    idx = [oracle.index(lz.label(1, i)) for i in range(max(2, state.length(1) + 1))]
    ok = (idx[0] is not None and idx[0].exact and idx[0].value == 1
          and idx[1] is not None and idx[1].exact and idx[1].value == 2)
    rep.add("col1.gamma", ok, ", ".join(str(x) for x in idx))


def audit_grid(state: GridState, store=None, *, max_n: int = 10,
               budget: int = growth.DEFAULT_BUDGET_BITS) -> AuditReport:
    """Count laws, side conditions, identities and orderings of a grid."""
    from ..critcalc import load_corpus
    from ..critcalc.bridge import IndexOracle
    if store is None:
        store, _ = load_corpus()
    oracle = IndexOracle(store, max_n)
    rep = AuditReport()
    used = [n for n in range(NCOLS) if state.length(n)]
    missing = check_side_conditions(store, used)
    rep.add("side-conditions", not missing,
            "missing: " + "; ".join(missing) if missing else
            "; ".join(t for cols, t in SIDE_CONDITIONS if set(cols) & set(used)))
    _count_checks(state, rep, budget)
    rep.identities = grid_identities(state)
    for ident in rep.identities:
        _settle(ident, store, oracle)
    _order_checks(state, rep, store, oracle)
    bounds = [i for i in rep.identities if i.kind == "boundary"]
    rep.add("boundaries", all(i.status != "conflict" for i in bounds),
            f"{len(bounds)} recorded")
    if state.length(4):
        # a(4,0) = kappa3 < mu = a(5,0) = a(4,1)
        o = store.derive_order(parse_ord("kappa3"), parse_ord("mu"))
        rep.add("order.a40<a41", o == Order.LT, f"fact store: kappa3 {o.name} mu")
    ids = {(i.kind, i.where): i for i in rep.identities}
    for key, cid in [(("seed", (4, 0)), "seed.a40=kappa3"), (("seed", (4, 1)), "seed.a41=a50"),
                     (("seed", (5, 1)), "seed.a51=k(kappa3)")]:
        if key in ids:
            rep.add(cid, ids[key].status != "conflict", f"{ids[key].text()} [{ids[key].status}]")
    return rep


def dump_grid(state: GridState, report: AuditReport | None = None) -> dict:
    """JSON-ready columns of ``{index, term, crit_label, identities}``."""
    attached: dict[tuple[int, int], list[dict]] = {}
    for ident in (report.identities if report else grid_identities(state)):
        attached.setdefault(ident.where, []).append(ident.to_dict())
    cols = {}
    for n in range(NCOLS):
        cols[str(n)] = [{"index": e.index, "term": render_term(e.term),
                         "crit_label": str(state.label(n, e.index)),
                         "identities": attached.get((n, e.index), [])}
                        for e in state.columns[n]]
    out = {"schema_version": SCHEMA_VERSION, "caps": {str(k): v for k, v in state.caps.items()},
           "consumed": {str(k): v for k, v in state.consumed.items()},
           "truncated": {str(k): v for k, v in state.truncated.items()},
           "columns": cols}
    if report is not None:
        out["audit"] = report.to_dict()
    return out


def dumps_grid(state: GridState, report: AuditReport | None = None) -> str:
    return json.dumps(dump_grid(state, report), indent=2)
