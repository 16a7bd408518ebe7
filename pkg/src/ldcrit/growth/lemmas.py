"""Growth lemmas for the Ct columns, checked by induction on m."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .arith import DEFAULT_BUDGET_BITS
from .expr import CtApp, FApp, Num, Var, plus, render
from .prover import GrowthLemma, Hypothesis, Prover

# Ct_n(m) = 2^m = F_3(m - 3) + 3 for the power columns
_POW_ROWS = [GrowthLemma(f"row{n}", n, 0, 3, 3, 3, exact=True) for n in (0, 1, 3, 6, 8)]

# (column, F index, lag): Ct_n(m) >= F_k(m - lag) + 4
ROW_BOUNDS = {2: (4, 4), 4: (5, 2), 5: (6, 3), 7: (7, 2), 9: (8, 2), 10: (9, 2)}

CT2_ESTIMATE = GrowthLemma("ct2-estimate", 2, 4, 4, 0, 3)

# verification order: each lemma may use the ones verified before it
LEMMAS: list[GrowthLemma] = _POW_ROWS + [CT2_ESTIMATE] + [
    GrowthLemma(f"row{n}", n, 0, k, lag, 4) for n, (k, lag) in sorted(ROW_BOUNDS.items())
]

# rows whose induction must close without any claimed step
REQUIRED_ROWS = frozenset({0, 1, 2, 3, 4, 5})


@dataclass
class LemmaReport:
    lemma: GrowthLemma
    base: str                      # verified | claimed | failed
    step: str                      # verified | claimed
    base_trace: list[str] = field(default_factory=list)
    step_trace: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.base == "failed":
            return "failed"
        if self.base == "verified" and self.step == "verified":
            return "verified"
        return "claimed"

    def to_dict(self) -> dict:
        return {"id": self.lemma.name, "statement": self.lemma.statement(),
                "status": self.status, "base": self.base, "step": self.step,
                "base_trace": self.base_trace, "step_trace": self.step_trace}


def _sides(lem: GrowthLemma, m):
    lhs = CtApp(lem.n, plus(m, lem.shift) if not isinstance(m, int) else Num(m + lem.shift))
    arg = plus(m, -lem.lag) if not isinstance(m, int) else Num(m - lem.lag)
    return lhs, plus(FApp(lem.k, arg), lem.c)


def _check_base(pr: Prover, lem: GrowthLemma, m: int) -> tuple[str, list[str]]:
    lhs, rhs = _sides(lem, m)
    a, b = pr.norm(lhs), pr.norm(rhs)
    head = f"m = {m}: {render(lhs)} vs {render(rhs)}"
    if isinstance(a, Num) and isinstance(b, Num):
        ok = a.value == b.value if lem.exact else a.value >= b.value
        return ("verified" if ok else "failed"), [f"{head}: exact integers"]
    if lem.exact:
        return ("verified", [f"{head}: identical normal forms"]) if a == b else ("claimed", [head])
    t = pr.prove(a, b, False)
    return ("verified", [head] + t) if t is not None else ("claimed", [head])


def _check_step(lemmas, lem: GrowthLemma, budget: int, max_depth: int) -> tuple[str, list[str]]:
    m = Var("m", lem.lag)
    ih_l, ih_r = _sides(lem, m)
    goal_l, goal_r = _sides(lem, plus(m, 1))
    pr0 = Prover(lemmas, budget=budget)
    hyp = Hypothesis(pr0.norm(ih_l), pr0.norm(ih_r), f"induction hypothesis at m >= {lem.lag}")
    pr = Prover(lemmas, [hyp], budget=budget, max_depth=max_depth)
    head = f"assume {render(ih_l)} >= {render(ih_r)}; show {render(goal_l)} >= {render(goal_r)}"
    if lem.exact:
        if pr.norm(goal_l) == pr.norm(goal_r):
            return "verified", [head, "identical normal forms"]
        return "claimed", [head]
    t = pr.prove(goal_l, goal_r, False)
    if t is None:
        return "claimed", [head, "outside the lemma library"]
    return "verified", [head] + t


def verify_induction_lemmas(*, budget: int = DEFAULT_BUDGET_BITS,
                            max_depth: int = 14) -> list[LemmaReport]:
    """Check the base case(s) and the induction step of every growth lemma."""
    proven: list[GrowthLemma] = []
    out = []
    for lem in LEMMAS:
        pr = Prover(proven, budget=budget, max_depth=max_depth)
        bases = [lem.lag, lem.lag + 1] if lem is CT2_ESTIMATE else [lem.lag]
        base, btrace = "verified", []
        for m in bases:
            st, tr = _check_base(pr, lem, m)
            btrace += tr
            if st != "verified":
                base = st
                break
        step, strace = _check_step(proven, lem, budget, max_depth)
        rep = LemmaReport(lem, base, step, btrace, strace)
        out.append(rep)
        if rep.status == "verified":
            proven.append(lem)
    return out


@lru_cache(maxsize=None)
def _library(budget: int) -> tuple[GrowthLemma, ...]:
    return tuple(r.lemma for r in verify_induction_lemmas(budget=budget) if r.status == "verified")


def library(budget: int = DEFAULT_BUDGET_BITS) -> list[GrowthLemma]:
    """The growth lemmas whose induction closes completely."""
    return list(_library(budget))
