"""Proof scripts: parsing, step checking, and the session fact store.

A script is line oriented (``#`` starts a comment)::

    script NAME
    var e: emb, b: ord           # schematic variables
    regular kappa0, kappa1       # constants known to be regular cardinals
    def ID: REL                  # definitions (prelude only)
    hyp ID: REL
    claim ID: REL                # accepted without proof, reported as claimed
    step ID: REL by RULE [from ID, ...] [with name=EXPR, ...]
    goal ID, ...
    end

Premises resolve to a step of the current script, then to ``script.id``,
then to a bare prelude id.  Facts that depend on hypotheses or contain
variables are exported as lemmas and can only be used elsewhere through
``inst``.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..term import NameTable, ParseError, PRELUDE_NAMES, Term
from .errors import (
    CalcError, CycleDetected, GoalUnproved, RuleMismatch, ScriptSyntaxError, UnknownPremise,
)
from .order import Order, OrderGraph
from .rules import RULES, RuleContext
from .syntax import (
    AppO, Const, Crit, EqO, ORDER_RELS, free_vars, norm, parse_expr, parse_relation,
    render, subst_vars,
)

PRELUDE = "prelude"


@dataclass(frozen=True)
class Fact:
    id: str                      # qualified: script.local
    rel: object
    rule: str
    premises: tuple[str, ...] = ()
    hyps: tuple[str, ...] = ()   # qualified hypothesis ids this fact rests on
    vars: frozenset = frozenset()
    claimed: bool = False

    @property
    def script(self) -> str:
        return self.id.split(".", 1)[0]

    @property
    def conditional(self) -> bool:
        return bool(self.hyps or self.vars)

    def __str__(self):
        return f"{self.id}: {self.rel}"


@dataclass
class Stmt:
    kind: str
    line: int
    id: str | None = None
    rel_text: str = ""
    rule: str | None = None
    premises: tuple[str, ...] = ()
    with_text: dict = field(default_factory=dict)
    names: tuple[str, ...] = ()


@dataclass
class Script:
    name: str
    stmts: list[Stmt]
    emb_vars: frozenset = frozenset()
    ord_vars: frozenset = frozenset()
    source: str = "<text>"


@dataclass
class StepResult:
    id: str
    line: int
    kind: str
    relation: str
    rule: str | None
    status: str                  # pass | fail | claimed | skipped
    message: str = ""
    runtime: float = 0.0

    def to_dict(self) -> dict:
        return {"id": self.id, "line": self.line, "kind": self.kind, "relation": self.relation,
                "rule": self.rule, "status": self.status, "witness": self.message or None,
                "runtime": round(self.runtime, 6)}


@dataclass
class ScriptResult:
    name: str
    source: str
    ok: bool
    steps: list[StepResult]
    goals: list[str]
    error: CalcError | None = None

    @property
    def status(self) -> str:
        if not self.ok:
            return "fail"
        return "claimed" if any(s.status == "claimed" for s in self.steps
                                if s.id.split(".", 1)[-1] in self.goals) else "pass"

    def to_dict(self) -> dict:
        return {"script": self.name, "source": self.source, "status": self.status,
                "goals": self.goals, "error": str(self.error) if self.error else None,
                "steps": [s.to_dict() for s in self.steps]}


# ---------------------------------------------------------------- parsing

_STEP_RE = re.compile(
    r"^step\s+(?P<id>[\w'-]+)\s*:\s*(?P<rel>.+?)\s+by\s+(?P<rule>\w+)"
    r"(?:\s+from\s+(?P<from>.+?))?(?:\s+with\s+(?P<with>.+))?$")
_LABELLED_RE = re.compile(r"^(?P<kind>def|hyp|claim)\s+(?P<id>[\w'-]+)\s*:\s*(?P<rel>.+)$")
_ID_RE = re.compile(r"^[\w'-]+(?:\.[\w'-]+)?$")


def _split_top(text: str) -> list[str]:
    """Split on commas outside brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        parts.append("".join(cur).strip())
    return parts


def parse_script(text: str, source: str = "<text>") -> Script:
    name = None
    stmts: list[Stmt] = []
    emb_vars: set[str] = set()
    ord_vars: set[str] = set()
    ended = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if ended:
            raise ScriptSyntaxError("text after 'end'", where)
        head = line.split(None, 1)[0]
        if name is None:
            if head != "script" or len(line.split()) != 2:
                raise ScriptSyntaxError("a script starts with 'script NAME'", where)
            name = line.split()[1]
            continue
        if head == "end":
            ended = True
            continue
        if head == "var":
            for part in _split_top(line[3:]):
                m = re.fullmatch(r"([A-Za-z_]\w*)\s*:\s*(emb|ord)", part)
                if not m:
                    raise ScriptSyntaxError(f"bad variable declaration {part!r}", where)
                (emb_vars if m.group(2) == "emb" else ord_vars).add(m.group(1))
            continue
        if head in ("regular", "goal"):
            names = tuple(_split_top(line[len(head):]))
            if not names:
                raise ScriptSyntaxError(f"'{head}' needs at least one name", where)
            stmts.append(Stmt(head, lineno, names=names))
            continue
        m = _LABELLED_RE.match(line)
        if m:
            stmts.append(Stmt(m.group("kind"), lineno, m.group("id"), m.group("rel")))
            continue
        m = _STEP_RE.match(line)
        if m:
            prem = tuple(_split_top(m.group("from") or ""))
            for p in prem:
                if not _ID_RE.match(p):
                    raise ScriptSyntaxError(f"bad premise reference {p!r}", where)
            with_text = {}
            for part in _split_top(m.group("with") or ""):
                k, eq, v = part.partition("=")
                if not eq or not k.strip():
                    raise ScriptSyntaxError(f"bad binding {part!r}", where)
                with_text[k.strip()] = v.strip()
            stmts.append(Stmt("step", lineno, m.group("id"), m.group("rel"), m.group("rule"),
                              prem, with_text))
            continue
        raise ScriptSyntaxError(f"cannot parse line: {line!r}", where)
    if name is None:
        raise ScriptSyntaxError("empty script", source)
    if not ended:
        raise ScriptSyntaxError("missing 'end'", source)
    return Script(name, stmts, frozenset(emb_vars), frozenset(ord_vars), source)


# ---------------------------------------------------------------- store

class FactStore:
    """All facts accepted in a session, keyed by qualified id."""

    def __init__(self, names: NameTable | None = None):
        self.names = names or PRELUDE_NAMES
        self.facts: dict[str, Fact] = {}
        self.regular: set[str] = set()
        self.graph = OrderGraph()
        self.claimed_graph = OrderGraph()
        self.results: dict[str, ScriptResult] = {}

    def __contains__(self, fid: str) -> bool:
        return fid in self.facts

    def __getitem__(self, fid: str) -> Fact:
        return self.facts[fid]

    def __len__(self):
        return len(self.facts)

    def proven(self):
        """Unconditional facts that rest on no claim."""
        return [f for f in self.facts.values() if not f.conditional and not f.claimed]

    def find(self, rel) -> Fact | None:
        """A proven, unconditional fact stating exactly ``rel`` (``=`` in either orientation)."""
        rel = norm(rel)
        flipped = type(rel)(rel.rhs, rel.lhs) if isinstance(rel, EqO) else None
        for f in self.facts.values():
            if not f.conditional and not f.claimed and (f.rel == rel or f.rel == flipped):
                return f
        return None

    def definitions(self) -> dict[str, object]:
        """Constant -> defining expression, from prelude definitions."""
        out = {}
        for f in self.facts.values():
            if f.rule != "def" or not isinstance(f.rel, EqO):
                continue
            l, r = f.rel.lhs, f.rel.rhs
            if isinstance(l, Const) and l.name not in out:
                out[l.name] = r
            elif isinstance(r, Const) and r.name not in out:
                out[r.name] = l
        return out

    def derive_order(self, a, b, include_claimed: bool = False) -> Order:
        a, b = _as_ord(a, self.names), _as_ord(b, self.names)
        g = self.graph
        if include_claimed:
            g = self.graph.copy()
            for f in self.facts.values():
                if f.claimed and not f.conditional:
                    g.add(f.rel)
        return g.compare(a, b)

    def order_matrix(self, ords) -> dict:
        ords = [_as_ord(o, self.names) for o in ords]
        return {str(a): {str(b): str(self.graph.compare(a, b)) for b in ords} for a in ords}

    def fingerprint(self) -> list[str]:
        return sorted(f"{f.id}|{f.rel}|{f.rule}|{','.join(f.premises)}" for f in self.facts.values())


def _as_ord(x, names):
    return parse_expr(x, names) if isinstance(x, str) else x


# ---------------------------------------------------------------- checking

def _resolve(ref: str, script: str, local: dict[str, Fact], store: FactStore, where: str) -> Fact:
    if "." not in ref and ref in local:
        return local[ref]
    qual = ref if "." in ref else f"{PRELUDE}.{ref}"
    if qual in store.facts:
        return store.facts[qual]
    if "." in ref and ref.split(".", 1)[0] == script and ref.split(".", 1)[1] in local:
        return local[ref.split(".", 1)[1]]
    raise UnknownPremise(f"unknown premise {ref!r}", where)


def _check_inst(concl, prem_facts: list[Fact], binding: dict, where: str, hyp_rel):
    if not prem_facts:
        raise RuleMismatch("inst needs the lemma as its first premise", where)
    lemma, rest = prem_facts[0], prem_facts[1:]
    if not lemma.conditional:
        raise RuleMismatch(f"{lemma.id} is not a lemma with variables or hypotheses", where)
    missing = lemma.vars - set(binding)
    if missing:
        raise RuleMismatch(f"unbound variables: {', '.join(sorted(missing))}", where)
    expect = subst_vars(lemma.rel, binding)
    if expect != concl:
        raise RuleMismatch(f"instance is {render(expect)}", where)
    have = {f.rel for f in rest}
    for hid in lemma.hyps:
        need = subst_vars(hyp_rel(hid), binding)
        if need not in have:
            raise RuleMismatch(f"hypothesis {hid} is not discharged: need {render(need)}", where)


def check_script(script: "Script | str", store: FactStore, *, strict: bool = True,
                 source: str | None = None) -> ScriptResult:
    """Check every statement; on success merge the new facts into ``store``.

    With ``strict`` the first error is raised, otherwise it is recorded in the
    result and the remaining statements are reported as skipped."""
    if isinstance(script, str):
        script = parse_script(script, source or "<text>")
    name = script.name
    local: dict[str, Fact] = {}
    graph = store.graph.copy()
    regular = set(store.regular)
    steps: list[StepResult] = []
    goals: list[str] = []
    error: CalcError | None = None
    hyp_facts: dict[str, Fact] = {}

    def parse_rel(text, where):
        try:
            return parse_relation(text, store.names, script.emb_vars, script.ord_vars)
        except ParseError as exc:
            raise ScriptSyntaxError(str(exc), where) from None

    if name in store.results and store.results[name].ok:
        err = ScriptSyntaxError(f"script {name!r} is already loaded", script.source)
        if strict:
            raise err
        return ScriptResult(name, script.source, False, [], [], err)

    for st in script.stmts:
        where = f"{script.source}:{st.line}"
        t0 = time.perf_counter()
        if error is not None:
            steps.append(StepResult(st.id or st.kind, st.line, st.kind, st.rel_text, st.rule, "skipped"))
            continue
        try:
            if st.kind == "regular":
                if name != PRELUDE:
                    raise ScriptSyntaxError("'regular' is only allowed in the prelude", where)
                regular |= set(st.names)
                continue
            if st.kind == "goal":
                for g in st.names:
                    f = local.get(g)
                    if f is None or f.rule in ("hyp", "def"):
                        raise GoalUnproved(f"goal {g!r} is not a proven step of {name}", where)
                    goals.append(g)
                continue
            if st.id in local:
                raise ScriptSyntaxError(f"duplicate id {st.id!r}", where)
            rel = parse_rel(st.rel_text, where)
            fv = frozenset(free_vars(rel))
            qid = f"{name}.{st.id}"
            if st.kind == "def":
                if name != PRELUDE:
                    raise ScriptSyntaxError("definitions are only allowed in the prelude", where)
                fact = Fact(qid, rel, "def")
            elif st.kind == "hyp":
                fact = Fact(qid, rel, "hyp", hyps=(qid,), vars=fv)
                hyp_facts[qid] = fact
            elif st.kind == "claim":
                fact = Fact(qid, rel, "claim", vars=fv, claimed=True)
            else:
                prem_facts = [_resolve(p, name, local, store, where) for p in st.premises]
                for pf in prem_facts:
                    if pf.conditional and pf.script != name and st.rule != "inst":
                        raise RuleMismatch(f"{pf.id} is a lemma; use it through 'inst'", where)
                binding = {}
                for k, v in st.with_text.items():
                    try:
                        binding[k] = parse_expr(v, store.names, script.emb_vars, script.ord_vars)
                    except ParseError as exc:
                        raise ScriptSyntaxError(str(exc), where) from None
                if st.rule == "inst":
                    _check_inst(rel, prem_facts, binding, where,
                                lambda h: (hyp_facts.get(h) or store.facts[h]).rel)
                    hyps = tuple(h for pf in prem_facts[1:] for h in pf.hyps)
                else:
                    rule = RULES.get(st.rule)
                    if rule is None:
                        raise RuleMismatch(f"unknown rule {st.rule!r}", where)
                    ctx = RuleContext(frozenset(regular), binding)
                    try:
                        rule(rel, [pf.rel for pf in prem_facts], ctx)
                    except RuleMismatch as exc:
                        raise RuleMismatch(f"step {st.id} ({st.rule}): {exc.msg}", where) from None
                    hyps = tuple(dict.fromkeys(h for pf in prem_facts for h in pf.hyps))
                claimed = any(pf.claimed for pf in prem_facts)
                fact = Fact(qid, rel, st.rule, tuple(pf.id for pf in prem_facts), hyps, fv, claimed)
            if isinstance(rel, ORDER_RELS) and not fact.conditional and not fact.claimed:
                bad = graph.add(rel)
                if bad is not None:
                    raise CycleDetected(f"{st.id} closes a strict cycle through "
                                        f"{bad[0]} and {bad[1]}", where)
            local[st.id] = fact
            status = "claimed" if fact.claimed else "pass"
            steps.append(StepResult(st.id, st.line, st.kind, str(rel), st.rule or st.kind, status,
                                    runtime=time.perf_counter() - t0))
        except CalcError as exc:
            error = exc
            steps.append(StepResult(st.id or st.kind, st.line, st.kind, st.rel_text, st.rule,
                                    "fail", exc.msg, time.perf_counter() - t0))
    if error is None and not goals:
        error = GoalUnproved(f"script {name} declares no goal", script.source)
    ok = error is None
    result = ScriptResult(name, script.source, ok, steps, goals, error)
    if ok:
        for f in local.values():
            store.facts[f.id] = f
            if f.claimed and not f.conditional:
                store.claimed_graph.add(f.rel)
        store.graph = graph
        store.regular = regular
    store.results[name] = result
    if strict and error is not None:
        raise error
    return result


def check_file(path, store: FactStore, *, strict: bool = True) -> ScriptResult:
    path = Path(path)
    return check_script(parse_script(path.read_text(), str(path.name)), store, strict=strict)
