from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from ldcrit.term import (
    J, Apply, Compose, NameTable, ParseError, PRELUDE_NAMES, UnknownNameError, is_pure, j_sub,
    leaves, parse_term, render_term,
)


def test_j_sub_base_cases():
    assert j_sub(1) == J
    assert j_sub(2) == Apply(J, J)
    assert j_sub(4) == Apply(Apply(Apply(J, J), J), J)
    assert render_term(j_sub(4)) == "jjjj"


def test_j_sub_rejects_zero():
    with pytest.raises(ValueError):
        j_sub(0)


def test_j_sub_recursion_up_to_64():
    for n in range(1, 65):
        assert j_sub(n + 1) == Apply(j_sub(n), J)
        assert leaves(j_sub(n)) == n


def test_parse_examples():
    assert parse_term("jj") == Apply(J, J)
    assert parse_term("jjj") == Apply(Apply(J, J), J)
    assert parse_term("j o j") == Compose(J, J)
    assert parse_term("j16") == j_sub(16)
    assert parse_term("j ( j j )") == Apply(J, Apply(J, J))


def test_render_examples():
    assert render_term(Apply(J, J)) == "jj"
    assert render_term(Apply(J, Apply(J, J))) == "j(jj)"
    assert render_term(Compose(J, J)) == "j o j"


def test_composition_binds_looser_than_application():
    assert parse_term("jj o j") == Compose(Apply(J, J), J)
    assert parse_term("j o j o j") == Compose(Compose(J, J), J)


def test_prelude_names():
    assert parse_term("k") == j_sub(10)
    assert parse_term("k'") == Apply(j_sub(10), j_sub(11))
    assert parse_term("k''") == Apply(j_sub(9), j_sub(14))
    assert parse_term("kp") == parse_term("k'")
    assert parse_term("kpp") == parse_term("k''")


def test_name_expansion_idempotent():
    nt = NameTable.prelude()
    nt.bind("e", "k(j)")
    once = parse_term("e", nt)
    nt.bind("f", once)
    assert parse_term("f", nt) == once
    assert is_pure(once)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_term("j(j")
    assert exc.value.pos is not None
    with pytest.raises(UnknownNameError):
        parse_term("zz")
    with pytest.raises(ParseError):
        parse_term("")


def _all_terms(depth: int):
    if depth == 0:
        return [J]
    smaller = _all_terms(depth - 1)
    out = list(smaller)
    for a, b in itertools.product(smaller, repeat=2):
        out.append(Apply(a, b))
        out.append(Compose(a, b))
    return list(dict.fromkeys(out))


def test_round_trip_exhaustive_small():
    terms = _all_terms(3)
    assert len(terms) > 500
    for t in terms:
        assert parse_term(render_term(t)) == t


terms = st.recursive(st.just(J), lambda c: st.builds(Apply, c, c) | st.builds(Compose, c, c),
                     max_leaves=64)


@given(terms)
def test_round_trip_random(t):
    assert parse_term(render_term(t)) == t


@given(st.integers(1, 200))
def test_jn_shorthand_round_trip(n):
    assert parse_term(render_term(j_sub(n))) == j_sub(n)
    assert parse_term(f"j{n}") == j_sub(n)


def test_terms_are_hash_consed():
    assert Apply(J, J) is Apply(J, J)
    assert PRELUDE_NAMES.lookup("k") is j_sub(10)
