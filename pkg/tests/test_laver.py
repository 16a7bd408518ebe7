from __future__ import annotations

import itertools
import json
import os
import subprocess
import sys
from functools import lru_cache

import numpy as np
import pytest

from ldcrit.laver import (
    AtLeast, CapExceeded, ElementRangeError, Exactly, LaverTable, build_table,
    check_left_distributivity, check_projection, compose_elem, crit_index, critical_sequence,
    equiv_index, eval_in, eval_term, load_table, mult, reduce_elem, row_period, save_table,
)
from ldcrit.term import J, Apply, Compose, parse_term, j_sub


def oracle_table(n: int) -> list[list[int]]:
    """Brute force from p*1 = p+1 and p*(q+1) = (p*q)*(p+1), rows from the top."""
    N = 1 << n
    T = [[0] * (N + 1) for _ in range(N + 1)]
    for q in range(1, N + 1):
        T[N][q] = q
    for p in range(N - 1, 0, -1):
        T[p][1] = p + 1
        for q in range(1, N):
            T[p][q + 1] = T[T[p][q]][p + 1]
    return [row[1:] for row in T[1:]]


def test_small_tables_literal():
    assert build_table(0).array0().tolist() == [[0]]
    assert (build_table(1).array0() + 1).tolist() == [[2, 2], [1, 2]]
    assert (build_table(2).array0() + 1).tolist() == [
        [2, 4, 2, 4], [3, 4, 3, 4], [4, 4, 4, 4], [1, 2, 3, 4]]


@pytest.mark.parametrize("n", range(0, 8))
def test_tables_match_oracle(n):
    assert (build_table(n).array0() + 1).tolist() == oracle_table(n)


def test_mult_and_compose_examples():
    t2 = build_table(2)
    assert mult(t2, 1, 1) == 2
    assert mult(t2, 4, 3) == 3
    assert compose_elem(t2, 1, 1) == 3
    assert compose_elem(build_table(1), 1, 1) == 1
    with pytest.raises(ElementRangeError):
        mult(t2, 0, 1)
    with pytest.raises(ElementRangeError):
        mult(t2, 5, 1)


def test_compose_row_is_composite():
    t = build_table(5)
    N = t.size
    for a, b in itertools.product(range(1, N + 1), repeat=2):
        c = compose_elem(t, a, b)
        for x in (1, 2, N // 2, N):
            assert mult(t, c, x) == mult(t, a, mult(t, b, x))


def test_row_period_examples():
    t = build_table(3)
    assert row_period(t, 8) == 8
    assert row_period(t, 7) == 1
    for a in range(1, 9):
        p = row_period(t, a)
        assert p & (p - 1) == 0
        row = t.row(a)
        assert all(row[i] == row[i % p] for i in range(8))


def test_reduce_elem():
    assert reduce_elem(5, 2) == 1
    assert reduce_elem(4, 2) == 4
    assert reduce_elem(8, 2) == 4


def test_eval_examples():
    assert eval_term(parse_term("j11"), 2) == 3
    assert eval_term(parse_term("j o j"), 2) == 3
    assert eval_term(j_sub(16), 4) == 16
    assert eval_term(J, 3) == 1


def test_crit_index_examples():
    assert crit_index(J, 5) == Exactly(0)
    assert crit_index(j_sub(8), 5) == Exactly(3)
    assert crit_index(j_sub(2), 5) == Exactly(1)
    assert crit_index(j_sub(64), 5) == AtLeast(6)


def test_crit_index_reads_one_table_past_max_n():
    # j8 is top in A_3 but not A_4, so max_n = 3 already resolves it
    assert crit_index(j_sub(8), 3) == Exactly(3)
    assert crit_index(j_sub(8), 2) == AtLeast(3)


def test_equiv_index_examples():
    assert equiv_index(J, j_sub(2), 5) == Exactly(1)
    assert equiv_index(parse_term("j11"), parse_term("j o j"), 8) == AtLeast(9)
    assert equiv_index(J, J, 4) == AtLeast(5)


def _oracle_crit_of_j_applied(m: int, max_n: int):
    # crit(j j_m) from the brute-force tables: last n where 1 * m is the top
    top = [oracle_table(n)[0][reduce_elem(m, n) - 1] == 1 << n for n in range(max_n + 2)]
    return top.index(False) - 1


def test_critical_sequence_of_j():
    seq = critical_sequence(J, 4, 6)
    assert seq[0] == Exactly(0)
    for prev, nxt in zip(seq, seq[1:]):
        assert nxt == Exactly(_oracle_crit_of_j_applied(1 << prev.value, 6))
    assert [c.value for c in seq] == [0, 1, 2, 4]


def test_ld_exhaustive_a4():
    rep = check_left_distributivity(build_table(4))
    assert rep.passed and rep.exhaustive and rep.checked == 16 ** 3


def test_ld_sampled_is_seeded():
    t = build_table(9)
    a = check_left_distributivity(t, samples=5000, seed=3, exhaustive=False)
    b = check_left_distributivity(t, samples=5000, seed=3, exhaustive=False)
    assert a.passed and a == b


def test_corrupted_table_fails():
    rows = build_table(4).array0().astype(np.int64) + 1
    rows[5, 3] = rows[5, 3] % 16 + 1
    rep = check_left_distributivity(LaverTable.from_rows(rows))
    assert not rep.passed
    a, b, c = rep.counterexample
    assert rows[a - 1, rows[b - 1, c - 1] - 1] != rows[rows[a - 1, b - 1] - 1, rows[a - 1, c - 1] - 1]


def _terms_up_to(leaves: int):
    by = {1: [J]}
    for k in range(2, leaves + 1):
        by[k] = [Apply(a, b) for i in range(1, k) for a in by[i] for b in by[k - i]]
    return [t for k in by for t in by[k]]


@pytest.mark.parametrize("n", range(1, 5))
def test_term_level_left_distributivity(n):
    t = build_table(n)
    small = _terms_up_to(3)
    for a, b, c in itertools.product(small, repeat=3):
        assert eval_in(t, Apply(a, Apply(b, c))) == eval_in(t, Apply(Apply(a, b), Apply(a, c)))


@pytest.mark.parametrize("n", range(0, 4))
def test_evaluation_commutes_with_projection(n):
    for term in _terms_up_to(5):
        assert reduce_elem(eval_term(term, n + 1), n) == eval_term(term, n)


@pytest.mark.parametrize("n", range(0, 9))
def test_projection(n):
    assert check_projection(n) == (True, None)


def test_j_progression():
    # j_m evaluates to m mod 2^n in A_n
    for n in range(0, 6):
        for m in range(1, 70):
            assert eval_term(j_sub(m), n) == reduce_elem(m, n)


def test_cache_round_trip(tmp_path):
    t = build_table(5)
    p = tmp_path / "a5.bin"
    save_table(t, p)
    back = load_table(p)
    assert np.array_equal(back.array0(), t.array0())


def test_lazy_and_eager_agree():
    lazy = LaverTable(8, eager_cap=4)
    assert lazy.lazy
    eager = build_table(8)
    for a in (256, 255, 128, 1, 77):
        assert np.array_equal(lazy.row(a), eager.row(a))
    assert np.array_equal(lazy.array0(), eager.array0())


def test_caps():
    with pytest.raises(CapExceeded):
        build_table(17)
    with pytest.raises(CapExceeded):
        crit_index(J, 16)


_SNAPSHOT = """
import json
from ldcrit._accel import backend
from ldcrit.laver import build_table, check_left_distributivity, LaverTable
t = LaverTable(7, eager_cap=3)
rows = t.array0().tolist()
print(json.dumps({"backend": backend(), "a7": rows,
                  "ld": check_left_distributivity(build_table(6)).passed}))
"""


def test_pure_python_fallback_agrees():
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, LDCRIT_NO_NUMBA=flag)
        cp = subprocess.run([sys.executable, "-c", _SNAPSHOT], env=env, capture_output=True,
                            text=True, check=True)
        out[flag] = json.loads(cp.stdout)
    assert out["1"]["backend"] == "python"
    assert out["0"]["a7"] == out["1"]["a7"] == (build_table(7).array0()).tolist()
    assert out["0"]["ld"] and out["1"]["ld"]
