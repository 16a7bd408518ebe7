from __future__ import annotations

import pytest

from ldcrit.critcalc import (
    CHAIN17, CHAIN_FROM_MU, CORPUS_ORDER, BridgeViolation, FactStore, Order, RULES,
    RuleMismatch, UnknownPremise, bridge_audit, check_script, load_corpus, parse_ord,
    parse_relation, verify_jn_values, witness,
)
from ldcrit.laver import Exactly, crit_index


def _prelude_store():
    store, results = load_corpus(["prelude"])
    assert results[0].ok
    return store


def test_corpus_has_no_failures(corpus):
    store, results = corpus
    assert [r.name for r in results] == [c.rsplit("/", 1)[-1] for c in CORPUS_ORDER]
    bad = [(r.name, str(r.error)) for r in results if r.status == "fail"]
    assert not bad
    assert {r.name for r in results if r.status == "claimed"} <= {"sigma", "skip9"}


def test_rules_are_registered():
    for name in ("above_crit", "crit_moves", "subst", "trans", "app_app", "below_crit"):
        assert name in RULES


def test_wrong_direction_step_is_rejected():
    store = _prelude_store()
    bad = "script bad\nstep x: kappa1 < kappa0 by subst from d1, m1\nend\n"
    res = check_script(bad, store, strict=False)
    assert res.status == "fail"
    assert isinstance(res.error, RuleMismatch)
    with pytest.raises(RuleMismatch):
        check_script(bad.replace("bad", "bad2"), store)


def test_unknown_premise_is_rejected():
    store = _prelude_store()
    with pytest.raises(UnknownPremise):
        check_script("script bad\nstep x: kappa0 < kappa2 by trans from lt01, nope\nend\n", store)


def test_failed_script_adds_no_facts():
    store = _prelude_store()
    before = store.fingerprint()
    check_script("script bad\nstep ok: kappa0 < kappa2 by trans from lt01, lt12\n"
                 "step x: kappa1 < kappa0 by subst from d1, m1\nend\n", store, strict=False)
    assert store.fingerprint() == before


def test_derive_order_partial_knowledge():
    store = _prelude_store()
    assert store.derive_order("kappa0", "kappa4") == Order.LT
    assert store.derive_order("kappa4", "kappa0") == Order.GT
    assert store.derive_order("kappa2", "kappa2") == Order.EQ
    assert store.derive_order("kappa2_5^10", "kappa2_5^9") == Order.UNKNOWN


def test_derive_order_full_corpus(corpus):
    store, _ = corpus
    for chain in (CHAIN17, CHAIN_FROM_MU):
        ords = [parse_ord(x) for x in chain]
        for a, b in zip(ords, ords[1:]):
            assert store.derive_order(a, b) == Order.LT, (a, b)
    assert store.derive_order("kappa2_5^10", "kappa2_5^9") == Order.LT


def test_claims_are_excluded_from_find(corpus):
    store, _ = corpus
    claims = [f for f in store.facts.values() if f.claimed]
    assert claims
    for f in claims:
        assert f.rule == "claim"
        assert store.find(f.rel) is None or not store.find(f.rel).claimed


def test_jn_value_rows(corpus):
    store, _ = corpus
    rep = verify_jn_values(store, rows=[3, 4, 16])
    assert rep.ok, rep.to_dict()["undischarged"]
    assert {c.row for c in rep.cells} == {3, 4, 16}


def test_bridge_clean_on_corpus(corpus):
    store, _ = corpus
    rep = bridge_audit(store, 8, fatal=False)
    assert not rep.violations
    assert rep.order_checked > 0 and rep.equiv_checked > 0


def test_bridge_catches_false_equivalence(corpus):
    store, _ = corpus
    # j and jj already differ below kappa1, so agreement up to kappa3 is false
    with pytest.raises(BridgeViolation):
        bridge_audit(store, 8, extra=[parse_relation("j ~[kappa3] j2")])


def test_witness_matches_tables(corpus):
    store, _ = corpus
    defs = store.definitions()
    assert crit_index(witness(parse_ord("kappa0"), defs), 6) == Exactly(0)
    assert crit_index(witness(parse_ord("kappa2"), defs), 6) == Exactly(2)
    assert witness(parse_ord("sigma1"), defs) is None


def test_replay_is_deterministic(corpus):
    store, _ = corpus
    again, results = load_corpus()
    assert again.fingerprint() == store.fingerprint()
    assert [r.status for r in results] == [r.status for r in corpus[1]]


def test_fresh_store_per_load():
    a, _ = load_corpus(["prelude"])
    b, _ = load_corpus(["prelude"], FactStore())
    assert a.fingerprint() == b.fingerprint()


def test_prelude_orders_only_the_kappa_chain():
    store = _prelude_store()
    names = ["kappa0", "kappa1", "kappa2", "kappa3", "kappa4"]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            assert store.derive_order(a, b) == Order.LT
    for other in ("sigma1", "sigma2", "kappa2_5"):
        for a in names:
            assert store.derive_order(a, other) == Order.UNKNOWN, (a, other)


@pytest.mark.parametrize("text", ["j11 ~[kappa2^7] j o j", "j14 ~[kappa2^13] j(j3)"])
def test_documented_equivalences_hold_in_tables(corpus, text):
    from ldcrit.laver import eval_term
    store, _ = corpus
    rel = parse_relation(text, store.names)
    assert store.find(rel) is not None
    for n in range(9):
        assert eval_term(rel.lhs, n) == eval_term(rel.rhs, n)
