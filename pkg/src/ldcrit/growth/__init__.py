"""Fast-growing functions F_k and Ct_N, exact where feasible and symbolic beyond."""

from __future__ import annotations

from .arith import (
    CT_INITIAL,
    DEFAULT_BUDGET_BITS,
    POW_COLUMNS,
    Ct,
    Ctfunc,
    F,
    Overflow,
    UndefinedColumn,
    ct_exact,
    ctfunc_exact,
    f_exact,
    is_symbolic,
)
from .chain import CHAIN, ChainItem, ChainReport, g4_identity, prove_relation, verify_bound_chain
from .expr import (
    Add,
    BoundExpr,
    CtApp,
    CtChain,
    Diff,
    ExprSyntaxError,
    FApp,
    Num,
    Plus,
    Pow2,
    Var,
    parse_bound,
    render,
)
from .lemmas import CT2_ESTIMATE, LEMMAS, REQUIRED_ROWS, LemmaReport, library, verify_induction_lemmas
from .prover import VERDICTS, GrowthLemma, Hypothesis, Prover, Verdict, bound_compare, lower_value, normalize


def evaluate(e: BoundExpr, budget: int = DEFAULT_BUDGET_BITS) -> int | BoundExpr:
    """The exact value when it fits the budget, else the normal form."""
    n = normalize(e, budget)
    return n.value if isinstance(n, Num) else n


__all__ = [n for n in dir() if not n.startswith("_")]
