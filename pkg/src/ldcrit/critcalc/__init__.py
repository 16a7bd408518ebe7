"""A checker for proof scripts about critical points of embeddings."""

from .bridge import (
    BridgeReport, IndexOracle, JnValuesReport, audit_relation, bridge_audit, verify_jn_values,
    witness,
)
from .checker import (
    Fact, FactStore, ScriptResult, StepResult, check_file, check_script, parse_script,
)
from .corpus import CHAIN17, CHAIN_FROM_MU, CORPUS_ORDER, corpus_dir, corpus_text, load_corpus
from .errors import (
    BridgeViolation, CalcError, CycleDetected, GoalUnproved, RuleMismatch, ScriptSyntaxError,
    UnknownPremise,
)
from .order import Order, OrderGraph
from .rules import RULES
from .syntax import (
    AppO, Const, Crit, EqE, EqO, EquivAt, LeO, LtO, SupBelow, parse_expr, parse_ord,
    parse_relation, render,
)

__all__ = [
    "AppO", "BridgeReport", "BridgeViolation", "CHAIN17", "CHAIN_FROM_MU", "CORPUS_ORDER",
    "CalcError", "Const", "Crit", "CycleDetected", "EqE", "EqO", "EquivAt", "Fact",
    "FactStore", "GoalUnproved", "IndexOracle", "LeO", "LtO", "Order", "OrderGraph", "RULES",
    "RuleMismatch", "ScriptResult", "ScriptSyntaxError", "StepResult", "SupBelow",
    "JnValuesReport", "UnknownPremise", "audit_relation", "bridge_audit", "check_file",
    "check_script", "corpus_dir", "corpus_text", "load_corpus", "parse_expr", "parse_ord",
    "parse_relation", "parse_script", "render", "verify_jn_values", "witness",
]
