from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from ldcrit import growth
from ldcrit.growth import (
    CT2_ESTIMATE, Ct, Ctfunc, F, Overflow, UndefinedColumn, bound_compare, ct_exact, f_exact,
    g4_identity, is_symbolic, parse_bound, render, verify_induction_lemmas,
    verify_bound_chain,
)


def f_oracle(k: int, m: int) -> int:
    """F_0 = successor and F_{k+1}(m) = F_k iterated m + 1 times from 1."""
    if k == 0:
        return m + 1
    if k == 1:
        v = 1
        for _ in range(m + 1):
            v = f_oracle(0, v)
        return v
    v = 1
    for _ in range(m + 1):
        v = f_oracle(k - 1, v)
    return v


@pytest.mark.parametrize("k,m", [(k, m) for k in range(4) for m in range(6)] + [(4, 0)])
def test_f_matches_recursion(k, m):
    assert f_exact(k, m) == f_oracle(k, m)


def test_f3_closed_form_to_20():
    # F_3 iterated from F_2, with F_2 checked against the recursion above
    for x in range(40):
        assert f_oracle(2, x) == 2 * x + 3
    v = f_oracle(2, 1)                  # F_3(0) = F_2(1)
    for m in range(21):
        assert f_exact(3, m) == v == 2 ** (m + 3) - 3
        v = 2 * v + 3                   # F_3(m + 1) = F_2(F_3(m))


def test_f_examples():
    assert F(0, 5) == 6
    assert F(1, 5) == 7
    assert F(2, 5) == 13
    assert F(3, 1) == 13
    assert F(4, 1) == 65533
    assert is_symbolic(F(4, 3))
    assert render(F(4, 3)) == "F[4](3)"


def ct2_oracle(m: int) -> int:
    v = 0
    for _ in range(m):
        v += 2 ** v
    return v


def test_ct_values():
    assert [Ct(2, m) for m in range(5)] == [ct2_oracle(m) for m in range(5)] == [0, 1, 3, 11, 2059]
    for n in (0, 1, 3, 6, 8):
        assert [Ct(n, m) for m in range(8)] == [2 ** m for m in range(8)]
    assert Ct(4, 1) == 8
    assert Ct(5, 1) == 2
    assert Ctfunc(3, 5, 1) == 256
    assert Ctfunc(2, 2, 7) == 7
    assert is_symbolic(Ct(4, 2))


def test_ctfunc_composes_columns():
    # Ctfunc[1,4](1) = Ct_1(Ct_2(Ct_3(1)))
    assert Ctfunc(1, 4, 1) == 2 ** ct2_oracle(2)
    assert Ctfunc(0, 3, 2) == 2 ** 2 ** ct2_oracle(2) == 256


def test_g4_identity():
    assert g4_identity() == (True, 256)


@given(st.integers(0, 4), st.integers(0, 10))
def test_monotone_in_m(n, m):
    if n == 2:
        m = min(m, 4)
    a, b = Ct(n, m, 4096), Ct(n, m + 1, 4096)
    if not (is_symbolic(a) or is_symbolic(b)):
        assert a < b


def test_bad_columns_and_budget():
    with pytest.raises(UndefinedColumn):
        ct_exact(11, 1)
    with pytest.raises(ValueError):
        ct_exact(2, -1)
    with pytest.raises(Overflow):
        f_exact(4, 2, budget=64)


@pytest.mark.parametrize("a,b,kind", [
    ("F[4](1)", "F[3](F[3](1))", "ProvenEQ"),
    ("F[4](2)", "F[4](1)", "ProvenGT"),
    ("F[5](1)", "F[4](253)", "ProvenGT"),
    ("Ct[4](2)", "Ct[4](1)", "ProvenGT"),
    ("Ct[2](5)", "F[4](1)", "ProvenGT"),
    ("2^(Ct[2](3))", "2059", "ProvenLT"),
])
def test_bound_compare_examples(a, b, kind):
    v = bound_compare(parse_bound(a), parse_bound(b))
    assert v.kind == kind
    assert v.trace


def test_parse_errors():
    with pytest.raises(growth.ExprSyntaxError):
        parse_bound("F[4](")


def test_lemmas():
    reps = {r.lemma.name: r for r in verify_induction_lemmas()}
    ct2 = reps[CT2_ESTIMATE.name]
    assert ct2.base == ct2.step == "verified"
    for n in growth.REQUIRED_ROWS:
        assert reps[f"row{n}"].status == "verified", n
    assert reps["row7"].status == "verified"
    assert all(r.status != "failed" for r in reps.values())


def test_chain_is_proven_with_traces():
    rep = verify_bound_chain()
    assert rep.status == "Proven"
    assert all(i.trace for i in rep.items)
    assert rep.items[-1].lhs == "Ctfunc[0,6](1)" and rep.items[-1].rhs == "F[5](1)"


@pytest.mark.parametrize("a,b,kind", [
    ("Ct[4](2)", "F[4](253) + 7", "ProvenGT"),
    ("F[3](10)", "F[3](10)", "ProvenEQ"),
    ("F[9](F[8](F[8](254)))", "F[9](F[8](F[4](254)))", "ProvenGT"),
    ("Ctfunc[0,6](1)", "F[4](F[4](254))", "ProvenGT"),
])
def test_documented_comparisons(a, b, kind):
    assert bound_compare(parse_bound(a), parse_bound(b)).kind == kind


def test_f_monotone_small():
    for k in range(4):
        vals = [f_exact(k, m) for m in range(13)]
        assert vals == sorted(set(vals))
    for m in range(1, 4):
        assert [f_exact(k, m) for k in range(4)] == sorted({f_exact(k, m) for k in range(4)})
    assert F(4, 0) == 13


def test_symbolic_degradation():
    v = Ctfunc(1, 7, 0)
    assert is_symbolic(v) and render(v) == "Ctfunc[1,7](0)"


def test_exact_values_satisfy_verified_lemmas():
    # Ct_n(m + shift) >= F_k(m - lag) + c wherever both sides are exact
    for rep in verify_induction_lemmas():
        if rep.status != "verified":
            continue
        lem = rep.lemma
        for m in range(lem.lag, lem.lag + 4):
            lhs, rhs = Ct(lem.n, m + lem.shift, 4096), F(lem.k, m - lem.lag, 4096)
            if is_symbolic(lhs) or is_symbolic(rhs):
                continue
            assert (lhs == rhs + lem.c) if lem.exact else (lhs >= rhs + lem.c), (lem.name, m)
