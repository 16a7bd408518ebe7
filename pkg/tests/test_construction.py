from __future__ import annotations

import json

import pytest

from ldcrit.construction import (
    HAT, NCOLS, SEEDS, MissingSideCondition, audit_grid, dump_grid, dumps_grid, init_grid,
    normalize_caps, run_grid,
)
from ldcrit.critcalc import AppO, Const, FactStore, IndexOracle, load_corpus
from ldcrit.laver import Exactly
from ldcrit.term import Apply, J, PRELUDE_NAMES, j_sub, parse_term, render_term

K2 = PRELUDE_NAMES.lookup("k''")


@pytest.fixture(scope="module")
def grid3(corpus):
    return run_grid(3, corpus[0])


def test_caps_respected(grid3):
    for n in range(NCOLS):
        assert grid3.length(n) == 3
        assert grid3.truncated[n]


def test_normalize_caps():
    assert normalize_caps(2) == {n: 2 for n in range(NCOLS)}
    caps = normalize_caps({n: 1 for n in range(NCOLS)} | {4: 5})
    assert caps[4] == 5 and caps[0] == 1
    with pytest.raises(ValueError):
        normalize_caps({n: 1 for n in range(NCOLS)} | {6: 0})
    with pytest.raises(ValueError):
        normalize_caps(-1)


def test_seeds():
    g = init_grid(1)
    for n in range(NCOLS):
        assert g.terms(n) == ([SEEDS[n]] if n in SEEDS else [])
    assert SEEDS[6] == j_sub(10)


def test_entries_apply_next_column_to_hat_column(grid3):
    for n in range(NCOLS):
        for e in grid3.columns[n]:
            if e.block is None:
                continue
            maker = K2 if n == NCOLS - 1 else grid3.lazy.term(n + 1, e.block)
            assert e.term == Apply(maker, grid3.lazy.term(HAT[n], e.source))


def test_early_label_indices(corpus):
    # table indices of a(0, i) and a(1, i)
    g = run_grid(5, corpus[0])
    oracle = IndexOracle(corpus[0], 10)
    assert [oracle.index(g.label(0, i)) for i in range(6)] == [Exactly(i) for i in range(6)]
    assert [oracle.index(g.label(1, i)) for i in range(4)] == [Exactly(1 << i) for i in range(4)]


def test_first_entries_of_column_zero():
    assert run_grid(3).terms(0) == [J, j_sub(2), j_sub(4)]


def test_prefix_stability(corpus):
    small, big = run_grid(3, corpus[0]), run_grid(5, corpus[0])
    for n in range(NCOLS):
        assert big.terms(n)[:3] == small.terms(n)
        assert [str(big.label(n, i)) for i in range(3)] == [str(small.label(n, i)) for i in range(3)]


def test_terms_reparse(grid3):
    for n in range(NCOLS):
        for t in grid3.terms(n):
            assert parse_term(render_term(t)) == t


def test_column_eleven_is_kpp_of_column_six(grid3):
    assert grid3.terms(11) == [Apply(K2, grid3.lazy.term(6, i)) for i in range(3)]


def test_audit_passes_without_conflicts(corpus, grid3):
    rep = audit_grid(grid3, corpus[0])
    assert rep.ok, [c for c in rep.checks if not c.ok]
    assert not rep.conflicts
    ids = {(i.kind, i.where): i for i in rep.identities}
    assert ids[("seed", (4, 0))].status == "corpus"
    a51 = ids[("seed", (5, 1))]
    assert a51.rhs == AppO(j_sub(10), Const("kappa3")) and a51.status != "conflict"


def test_long_column_four(corpus):
    caps = {n: 3 for n in range(NCOLS)} | {4: 10, 5: 1}
    g = run_grid(caps, corpus[0])
    assert g.length(4) == 8           # Ct_4(1) entries from one consumed
    assert audit_grid(g, corpus[0]).ok


def test_missing_side_condition():
    with pytest.raises(MissingSideCondition):
        run_grid(2, FactStore())
    store, _ = load_corpus(["prelude"])
    with pytest.raises(MissingSideCondition):
        run_grid(2, store)


def test_dump_shape(corpus, grid3):
    rep = audit_grid(grid3, corpus[0])
    d = json.loads(dumps_grid(grid3, rep))
    assert d["schema_version"] == 1
    assert set(d["columns"]) == {str(n) for n in range(NCOLS)}
    e = d["columns"]["4"][0]
    assert set(e) == {"index", "term", "crit_label", "identities"}
    assert e["crit_label"] == "kappa1^11"
    assert d["audit"]["ok"] is True
    assert dump_grid(grid3, rep) == dump_grid(grid3, rep)


def test_column_five_from_one_column_six_entry(corpus):
    g = run_grid({n: 3 for n in range(NCOLS)} | {6: 1}, corpus[0])
    assert g.consumed[5] == 1 and g.length(5) == 2       # Ct_5(1) = 2
    rep = audit_grid(g, corpus[0])
    assert rep.ok


def test_count_checks_present(corpus, grid3):
    rep = audit_grid(grid3, corpus[0])
    ids = {c.id: c for c in rep.checks}
    for n in range(NCOLS - 1):
        assert ids[f"count.col{n}"].ok and ids[f"blocks.col{n}"].ok
    assert ids["col11.k''-of-col6"].ok
    assert ids["side-conditions"].ok and ids["boundaries"].ok
