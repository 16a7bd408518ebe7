from .table import (
    AtLeast, CapExceeded, CritIndex, ElementRangeError, Exactly, LaverError,
    LaverTable, LDReport, MonotonicityViolation, ResourceBudgetExceeded,
    RowMismatch, UnevaluableTerm, build_table, check_left_distributivity,
    check_projection, compose_elem, crit_index, critical_sequence,
    equiv_index, eval_in, eval_term, mult, reduce_elem, row_period,
)
from .cache import load_table, save_table, CacheMismatch

__all__ = [
    "AtLeast", "CapExceeded", "CritIndex", "ElementRangeError", "Exactly",
    "LaverError", "LaverTable", "LDReport", "MonotonicityViolation",
    "ResourceBudgetExceeded", "RowMismatch", "UnevaluableTerm", "build_table",
    "check_left_distributivity", "check_projection", "compose_elem",
    "crit_index", "critical_sequence", "equiv_index", "eval_in", "eval_term",
    "mult", "reduce_elem", "row_period", "load_table", "save_table",
    "CacheMismatch",
]
