"""The chain of bounds from Ct_4(1) = 8 up to Ctfunc[0,6](1) > F_5(1)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import DEFAULT_BUDGET_BITS
from .expr import BoundExpr, parse_bound, render
from .lemmas import library
from .prover import Prover

CHAIN: list[tuple[str, str, str, str]] = [
    ("ct4-1", "Ct[4](1)", "=", "8"),
    ("ctfunc35-1", "Ctfunc[3,5](1)", "=", "256"),
    ("ctfunc25-1", "Ctfunc[2,5](1)", ">=", "F[4](252) + 3"),
    ("ctfunc15-1", "Ctfunc[1,5](1)", ">", "F[4](253)"),
    ("ct4-2", "Ct[4](2)", ">", "F[4](253) + 7"),
    ("ctfunc35-2", "Ctfunc[3,5](2)", ">", "F[4](254) + 4"),
    ("ctfunc06-1", "Ctfunc[0,6](1)", "=", "Ctfunc[0,5](2)"),
    ("ctfunc05-2", "Ctfunc[0,5](2)", ">", "Ctfunc[2,5](2)"),
    ("ctfunc25-2", "Ctfunc[2,5](2)", ">", "F[4](F[4](254))"),
    ("f4f4-254", "F[4](F[4](254))", ">", "F[5](1)"),
]

# the last four links combine into the headline bound
CONCLUSION = ("ctfunc06-1-vs-f5", "Ctfunc[0,6](1)", ">", "F[5](1)")


@dataclass
class ChainItem:
    id: str
    lhs: str
    rel: str
    rhs: str
    status: str                      # Proven | Unknown
    trace: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"id": self.id, "claim": f"{self.lhs} {self.rel} {self.rhs}",
                "status": self.status, "trace": self.trace}


@dataclass
class ChainReport:
    items: list[ChainItem]

    @property
    def status(self) -> str:
        return "Proven" if all(i.status == "Proven" for i in self.items) else "Unknown"

    def to_dict(self) -> dict:
        return {"status": self.status, "items": [i.to_dict() for i in self.items]}


def prove_relation(pr: Prover, a: BoundExpr, rel: str, b: BoundExpr) -> list[str] | None:
    na, nb = pr.norm(a), pr.norm(b)
    if rel == "=":
        if na == nb:
            return [f"{render(a)} = {render(b)}: both normalise to {render(na)}"]
        ge, le = pr.prove(na, nb, False), pr.prove(nb, na, False)
        return None if ge is None or le is None else ge + le
    if rel in (">", ">="):
        return pr.prove(na, nb, rel == ">")
    if rel in ("<", "<="):
        return pr.prove(nb, na, rel == "<")
    raise ValueError(rel)


def verify_bound_chain(*, budget: int = DEFAULT_BUDGET_BITS) -> ChainReport:
    pr = Prover(library(budget), budget=budget)
    items = []
    for cid, lhs, rel, rhs in CHAIN:
        t = prove_relation(pr, parse_bound(lhs), rel, parse_bound(rhs))
        items.append(ChainItem(cid, lhs, rel, rhs, "Proven" if t is not None else "Unknown", t or []))
    links = items[-4:]
    ok = all(i.status == "Proven" for i in links)
    cid, lhs, rel, rhs = CONCLUSION
    trace = [f"transitivity through {', '.join(i.id for i in links)}"] if ok else []
    items.append(ChainItem(cid, lhs, rel, rhs, "Proven" if ok else "Unknown", trace))
    return ChainReport(items)


def g4_identity(budget: int = DEFAULT_BUDGET_BITS) -> tuple[bool, int]:
    """2^(2^(Ct_2(2))) = 256."""
    from .arith import ct_exact
    v = 1 << (1 << ct_exact(2, 2, budget))
    return v == 256, v
