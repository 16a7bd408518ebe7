"""Command-line front end: ``ldcrit <subcommand> ...``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
3 a resource budget was exceeded.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
import time
from pathlib import Path

from . import growth
from .suite import Record, report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _caps(text: str) -> dict[int, int]:
    parts = [p for p in text.split(",") if p.strip()]
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"caps must be integers: {text!r}") from None
    if len(vals) == 1:
        vals *= 12
    if len(vals) != 12:
        raise argparse.ArgumentTypeError("--caps takes one value or twelve (c0,...,c11)")
    return dict(enumerate(vals))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--max-n", type=int, default=None, help="largest table index read")
    p.add_argument("--budget-bits", type=int, default=growth.DEFAULT_BUDGET_BITS,
                   help="bit budget for exact growth values")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--json", metavar="PATH", default=None,
                   help="write a JSON report to PATH ('-' for stdout)")
    p.add_argument("--corpus", metavar="DIR", default=None,
                   help="proof-script directory replacing the bundled corpus")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="ldcrit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("table", parents=[common], help="dump and verify A_n")
    p.add_argument("n", type=int)
    p.add_argument("--samples", type=int, default=10**6)

    p = sub.add_parser("eval", parents=[common], help="evaluate a term in A_n")
    p.add_argument("term")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("crit", parents=[common], help="index of a critical point")
    p.add_argument("term")

    p = sub.add_parser("compare", parents=[common], help="compare the images of two terms")
    p.add_argument("t1")
    p.add_argument("t2")

    p = sub.add_parser("check", parents=[common], help="check proof scripts")
    p.add_argument("scripts", nargs="+")

    p = sub.add_parser("order", parents=[common], help="derived order of named ordinals")
    p.add_argument("ordinals", nargs="*")

    p = sub.add_parser("growth", parents=[common], help="evaluate or compare growth bounds")
    p.add_argument("exprs", nargs="+")

    p = sub.add_parser("grid", parents=[common], help="run and audit the column construction")
    p.add_argument("--caps", type=_caps, default=_caps("3"))
    p.add_argument("--dump", action="store_true", help="print the full grid as JSON")

    sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    return ap


# ---------------------------------------------------------------- helpers

def _store(args):
    from .critcalc import load_corpus
    if args.corpus is None:
        from .suite import corpus_store
        return corpus_store()
    return load_corpus(directory=args.corpus)


def _term(text: str):
    from .term import ParseError, parse_term
    try:
        return parse_term(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse term {text!r}: {exc}") from None


def _max_n(args, default: int) -> int:
    return default if args.max_n is None else args.max_n


# ---------------------------------------------------------------- commands

def cmd_table(args) -> list[Record]:
    from .laver import build_table, check_left_distributivity, check_projection
    t = build_table(args.n)
    arr = t.array0()
    if args.n <= 4:
        for a in range(t.size):
            print(f"{a + 1:>3} | " + " ".join(f"{v + 1:>2}" for v in arr[a]))
    else:
        print(f"A_{args.n}: {t.size} elements")
    ld = check_left_distributivity(t, samples=args.samples, seed=args.seed)
    kind = "exhaustive" if ld.exhaustive else f"{ld.checked} sampled triples, seed {args.seed}"
    print(f"left distributivity: {'pass' if ld.passed else 'FAIL'} ({kind})")
    recs = [Record(f"table.A{args.n}.ld", "pass" if ld.passed else "fail", ld.to_dict())]
    if args.n >= 1:
        ok, pair = check_projection(args.n - 1)
        print(f"projection onto A_{args.n - 1}: {'pass' if ok else 'FAIL'}")
        recs.append(Record(f"table.A{args.n}.projection", "pass" if ok else "fail",
                           None if ok else list(pair)))
    return recs


def cmd_eval(args) -> list[Record]:
    from .laver import eval_term
    v = eval_term(_term(args.term), args.n)
    print(v)
    return [Record("eval", "pass", {"term": args.term, "n": args.n, "value": v})]


def cmd_crit(args) -> list[Record]:
    from .laver import crit_index
    ix = crit_index(_term(args.term), _max_n(args, 8))
    print(ix)
    return [Record("crit", "pass", {"term": args.term, "index": str(ix)})]


def cmd_compare(args) -> list[Record]:
    from .laver import equiv_index
    n = _max_n(args, 8)
    ix = equiv_index(_term(args.t1), _term(args.t2), n)
    msg = f"equal images through A_{n}" if not ix.exact else f"images first differ in A_{ix.value}"
    print(msg)
    return [Record("compare", "pass", msg)]


def cmd_check(args) -> list[Record]:
    from .critcalc import FactStore, ScriptSyntaxError, check_script, load_corpus, parse_script
    from .critcalc.corpus import CORPUS_ORDER
    scripts, recs = [], []
    for path in args.scripts:
        p = Path(path)
        if not p.exists():
            raise UsageError(f"no such script: {path}")
        try:
            scripts.append(parse_script(p.read_text(), p.name))
        except ScriptSyntaxError as exc:
            print(f"{p.stem}: fail ({exc})")
            recs.append(Record(f"script.{p.stem}", "fail", str(exc)))
    # the corpus scripts a checked script may cite: all of them, or those
    # ordered before it when it is itself part of the corpus
    names = [c.rsplit("/", 1)[-1] for c in CORPUS_ORDER]
    first = min((names.index(s.name) for s in scripts if s.name in names), default=len(names))
    store = FactStore()
    if first:
        load_corpus(CORPUS_ORDER[:first], store, directory=args.corpus)
    for s in scripts:
        t = time.perf_counter()
        res = check_script(s, store, strict=False)
        for st in res.steps:
            mark = {"pass": "ok", "claimed": "claimed", "skipped": "skip"}.get(st.status, "FAIL")
            print(f"  {st.id:<28} {mark:<8} {st.relation}")
        print(f"{res.name}: {res.status}" + (f" ({res.error})" if res.error else ""))
        recs.append(Record(f"script.{res.name}", res.status,
                           str(res.error) if res.error else {"goals": res.goals},
                           time.perf_counter() - t))
    return recs


def cmd_order(args) -> list[Record]:
    from .critcalc import CHAIN17, CHAIN_FROM_MU, Order, parse_ord
    store, _ = _store(args)
    if args.ordinals:
        if len(args.ordinals) != 2:
            raise UsageError("order takes no ordinals or exactly two")
        try:
            a, b = (parse_ord(x) for x in args.ordinals)
        except Exception as exc:
            raise UsageError(str(exc)) from None
        o = store.derive_order(a, b)
        print(f"{a} {o.name} {b}")
        return [Record("order", "pass", f"{a} {o.name} {b}")]
    recs = []
    for cid, chain in (("order.chain17", CHAIN17), ("order.from-mu", CHAIN_FROM_MU)):
        ords = [parse_ord(x) for x in chain]
        rel = [store.derive_order(x, y) for x, y in zip(ords, ords[1:])]
        text = str(ords[0]) + "".join(
            f" {'<' if r == Order.LT else '?' + r.name + '?'} {y}" for r, y in zip(rel, ords[1:]))
        print(text)
        recs.append(Record(cid, "pass" if all(r == Order.LT for r in rel) else "fail", text))
    return recs


def cmd_growth(args) -> list[Record]:
    try:
        es = [growth.parse_bound(x) for x in args.exprs]
    except growth.ExprSyntaxError as exc:
        raise UsageError(str(exc)) from None
    if len(es) == 1:
        v = growth.evaluate(es[0], args.budget_bits)
        out = str(v) if isinstance(v, int) else growth.render(v)
        print(out)
        return [Record("growth.eval", "pass", out)]
    if len(es) != 2:
        raise UsageError("growth takes one expression or two")
    v = growth.bound_compare(es[0], es[1], budget=args.budget_bits)
    print(v.kind)
    for line in v.trace:
        print("  " + line)
    return [Record("growth.compare", "pass", v.to_dict())]


def cmd_grid(args) -> list[Record]:
    from .construction import audit_grid, dump_grid, run_grid
    store, _ = _store(args)
    st = run_grid(args.caps, store)
    rep = audit_grid(st, store, max_n=_max_n(args, 10), budget=args.budget_bits)
    if args.dump:
        print(json.dumps(dump_grid(st, rep), indent=2))
    else:
        for n in range(12):
            trunc = " (truncated)" if st.truncated[n] else ""
            print(f"column {n:>2}: {st.length(n)} entries from {st.consumed[n]} consumed{trunc}")
        for c in rep.checks:
            if not c.ok:
                print(f"FAIL {c.id}: {c.detail}")
        tally = rep.to_dict()["identities"]
        print("identities: " + ", ".join(f"{k} {v}" for k, v in sorted(tally.items())))
        print(f"audit: {'pass' if rep.ok else 'FAIL'}")
    recs = [Record(f"grid.{c.id}", "pass" if c.ok else "fail", c.detail or None)
            for c in rep.checks]
    recs += [Record(f"grid.conflict.{i.where[0]}.{i.where[1]}", "fail", i.to_dict())
             for i in rep.conflicts]
    return recs


def cmd_verify_all(args) -> list[Record]:
    from .suite import run_all
    recs = run_all(seed=args.seed, budget=args.budget_bits)
    for r in recs:
        print(f"{r.status.upper():<8} {r.id}  ({r.runtime:.2f}s)")
    counts = {s: sum(r.status == s for r in recs) for s in ("pass", "fail", "claimed")}
    print(", ".join(f"{v} {k}" for k, v in counts.items()))
    return recs


COMMANDS = {"table": cmd_table, "eval": cmd_eval, "crit": cmd_crit, "compare": cmd_compare,
            "check": cmd_check, "order": cmd_order, "growth": cmd_growth, "grid": cmd_grid,
            "verify-all": cmd_verify_all}


def _write_json(path: str, recs: list[Record]) -> None:
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    text = json.dumps(report(recs, timestamp=stamp), indent=2, sort_keys=True, default=str)
    if path == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def run(argv=None) -> int:
    from .construction import ConstructionError
    from .critcalc import CalcError
    from .laver import CapExceeded, ElementRangeError
    from .term import ParseError
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        recs = COMMANDS[args.cmd](args)
    except UsageError as exc:
        print(f"ldcrit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, growth.Overflow) as exc:
        print(f"ldcrit: resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, ElementRangeError, growth.UndefinedColumn, ValueError) as exc:
        print(f"ldcrit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, CalcError) as exc:
        print(f"ldcrit: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        _write_json(args.json, recs)
    return EXIT_FAIL if any(r.status == "fail" for r in recs) else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
