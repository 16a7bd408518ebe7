"""Acceptance criteria 1-11, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion as it completes; the same lines are repeated in the terminal summary.
"""

from __future__ import annotations

import time

import pytest

from ldcrit import suite

# seconds allowed per criterion, where one is stated
TIME_LIMITS = {1: 120, 2: 1, 5: 1, 7: 10, 8: 30, 10: 60}

LINES: list[str] = []


@pytest.mark.parametrize("num,cid,fn", suite.CRITERIA, ids=[f"c{n:02d}-{c}" for n, c, _ in suite.CRITERIA])
def test_criterion(num, cid, fn):
    if num == 8:
        suite._STORE = None          # time the corpus check from a cold load
    t = time.perf_counter()
    rec = suite.run_check(fn)
    secs = time.perf_counter() - t
    limit = TIME_LIMITS.get(num)
    in_time = limit is None or secs < limit
    ok = rec.ok and in_time
    budget = f" (limit {limit}s)" if limit else ""
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2} {cid}: {secs:.2f}s{budget}"
    LINES.append(line)
    print("\n" + line)
    assert rec.ok, rec.witness
    assert in_time, f"took {secs:.2f}s, limit {limit}s"
