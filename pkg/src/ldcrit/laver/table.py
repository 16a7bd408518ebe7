"""The finite left-distributive tables ``A_n`` and term evaluation in them."""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass

import numpy as np

from .._accel import HAVE_NUMBA
from ..term import Apply, Compose, Gen, Ident, Term, Var, j_sub
from . import kernels

EAGER_CAP = 10
REQUIRED_CAP = 12
HARD_CAP = 16
DEFAULT_BUDGET_BYTES = int(os.environ.get("LDCRIT_BUDGET_BYTES", 64 * 2**20))


class LaverError(Exception):
    pass


class CapExceeded(LaverError):
    pass


class ResourceBudgetExceeded(CapExceeded):
    pass


class ElementRangeError(LaverError, ValueError):
    pass


class RowMismatch(LaverError):
    """The composition formula failed its row check."""


class MonotonicityViolation(LaverError):
    """Images equal to the top element do not form an initial segment of n."""


class LaverTable:
    """``A_n`` on ``{1..2^n}``.  Public methods take and return 1-based elements.

    Rows are materialised eagerly for ``n <= eager_cap`` and on demand above,
    under a lock, so the order of queries never changes any value.
    """

    def __init__(self, n: int, *, eager_cap: int = EAGER_CAP,
                 budget_bytes: int | None = None, _array: np.ndarray | None = None):
        if n < 0:
            raise ValueError("n must be >= 0")
        if n > HARD_CAP:
            raise CapExceeded(f"A_{n} is beyond the hard cap {HARD_CAP}")
        self.n = n
        self.size = 1 << n
        budget = DEFAULT_BUDGET_BYTES if budget_bytes is None else budget_bytes
        need = self.size * self.size * 2
        if _array is None and need > budget:
            raise ResourceBudgetExceeded(
                f"A_{n} needs {need} bytes of row storage, budget is {budget}")
        self._lock = threading.Lock()
        self._compose_cache: dict[tuple[int, int], int] = {}
        if _array is not None:
            self._T = _array
            self._done = np.ones(self.size, dtype=np.bool_)
            self.lazy = False
        else:
            self._T = np.zeros((self.size, self.size), dtype=np.uint16)
            self._done = np.zeros(self.size, dtype=np.bool_)
            self.lazy = n > eager_cap
            if not self.lazy:
                kernels.build_full(self._T)
                self._done[:] = True

    @classmethod
    def from_rows(cls, rows) -> "LaverTable":
        """Wrap an explicit 1-based table (used for fault injection and cache loads)."""
        arr = np.asarray(rows, dtype=np.int64)
        N = arr.shape[0]
        n = N.bit_length() - 1
        if arr.shape != (N, N) or (1 << n) != N:
            raise ValueError("table must be 2^n x 2^n")
        if arr.min() < 1 or arr.max() > N:
            raise ElementRangeError("table entries must lie in 1..2^n")
        return cls(n, _array=(arr - 1).astype(np.uint16))

    # -- storage

    def _ensure(self, x0: int) -> None:
        if self._done[x0]:
            return
        with self._lock:
            kernels.ensure_row(self._T, self._done, x0)

    def materialize(self) -> "LaverTable":
        if not self._done.all():
            with self._lock:
                for x in range(self.size - 1, -1, -1):
                    kernels.ensure_row(self._T, self._done, x)
        return self

    def array0(self) -> np.ndarray:
        """Full 0-based table (materialises every row)."""
        self.materialize()
        return self._T

    def _check(self, a: int) -> int:
        if not (isinstance(a, (int, np.integer)) and 1 <= a <= self.size):
            raise ElementRangeError(f"element {a!r} out of range 1..{self.size}")
        return int(a) - 1

    # -- algebra

    def mult(self, a: int, b: int) -> int:
        x, y = self._check(a), self._check(b)
        self._ensure(x)
        return int(self._T[x, y]) + 1

    def row(self, a: int) -> np.ndarray:
        x = self._check(a)
        self._ensure(x)
        return self._T[x].astype(np.int64) + 1

    def _mult0(self, x: int, y: int) -> int:
        self._ensure(x)
        return int(self._T[x, y])

    def compose(self, a: int, b: int) -> int:
        """The element whose row is ``c -> a*(b*c)``."""
        x, y = self._check(a), self._check(b)
        key = (x, y)
        hit = self._compose_cache.get(key)
        if hit is not None:
            return hit + 1
        N = self.size
        z = (self._mult0(x, (y + 1) % N) - 1) % N
        self._ensure(z)
        self._ensure(y)
        self._ensure(x)
        expect = self._T[x][self._T[y].astype(np.int64)]
        if not np.array_equal(self._T[z], expect):
            raise RowMismatch(f"composition of {a} and {b} in A_{self.n}: "
                              f"candidate {z + 1} has the wrong row")
        self._compose_cache[key] = z
        return z + 1

    def period(self, a: int) -> int:
        return int(kernels.row_period(self.row(a)))

    def __repr__(self) -> str:
        return f"LaverTable(n={self.n}, lazy={self.lazy})"


_TABLES: dict[int, LaverTable] = {}
_TABLES_LOCK = threading.Lock()


def build_table(n: int, *, budget_bytes: int | None = None) -> LaverTable:
    """Memoised ``A_n``."""
    t = _TABLES.get(n)
    if t is not None:
        return t
    if n > REQUIRED_CAP and budget_bytes is None and not os.environ.get("LDCRIT_STRETCH"):
        raise CapExceeded(f"A_{n} exceeds the configured cap {REQUIRED_CAP} "
                          "(set LDCRIT_STRETCH=1 or pass budget_bytes)")
    with _TABLES_LOCK:
        t = _TABLES.get(n)
        if t is None:
            budget = budget_bytes
            if budget is None and n > REQUIRED_CAP:
                budget = (1 << n) * (1 << n) * 2
            t = LaverTable(n, budget_bytes=budget)
            _TABLES[n] = t
    return t


def mult(t: LaverTable, a: int, b: int) -> int:
    return t.mult(a, b)


def compose_elem(t: LaverTable, a: int, b: int) -> int:
    return t.compose(a, b)


def row_period(t: LaverTable, a: int) -> int:
    return t.period(a)


def reduce_elem(a: int, n: int) -> int:
    """Representative of ``a`` in ``1..2^n``."""
    return (a - 1) % (1 << n) + 1


# ---------------------------------------------------------------- evaluation

class UnevaluableTerm(LaverError, ValueError):
    pass


def eval_in(t: LaverTable, term: Term) -> int:
    """Image of ``term`` in ``t``: j -> 1, id -> 2^n, application -> product,
    composition -> ``compose``."""
    memo: dict[int, int] = {}
    N = t.size
    stack = [term]
    while stack:
        u = stack[-1]
        if id(u) in memo:
            stack.pop()
            continue
        if isinstance(u, Gen):
            memo[id(u)] = 0
            stack.pop()
        elif isinstance(u, Ident):
            memo[id(u)] = N - 1
            stack.pop()
        elif isinstance(u, Var):
            raise UnevaluableTerm(f"variable {u.name!r} has no table image")
        else:
            l, r = memo.get(id(u.left)), memo.get(id(u.right))
            if l is None or r is None:
                if l is None:
                    stack.append(u.left)
                if r is None:
                    stack.append(u.right)
                continue
            if isinstance(u, Apply):
                memo[id(u)] = t._mult0(l, r)
            else:
                memo[id(u)] = t.compose(l + 1, r + 1) - 1
            stack.pop()
    return memo[id(term)] + 1


def eval_term(term: Term, n: int) -> int:
    return eval_in(build_table(n), term)


@dataclass(frozen=True)
class CritIndex:
    """``exact``: the critical point is ``gamma_value``; otherwise it is
    at least ``gamma_value``."""

    value: int
    exact: bool

    def __str__(self) -> str:
        return f"gamma_{self.value}" if self.exact else f">= gamma_{self.value}"


def Exactly(k: int) -> CritIndex:
    return CritIndex(k, True)


def AtLeast(k: int) -> CritIndex:
    return CritIndex(k, False)


def crit_index(term: Term, max_n: int) -> CritIndex:
    """Index of the critical point of ``term`` among ``gamma_0 < gamma_1 < ...``.

    ``crit = gamma_k`` exactly when the image is the top element in ``A_k`` but
    not in ``A_{k+1}``, so resolving indices up to ``max_n`` reads
    ``A_0..A_{max_n+1}``.
    """
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    if max_n + 1 > HARD_CAP:
        raise CapExceeded(f"max_n={max_n} needs A_{max_n + 1}")
    tops = [eval_term(term, n) == (1 << n) for n in range(max_n + 2)]
    first = next((n for n, top in enumerate(tops) if not top), None)
    if first is None:
        return AtLeast(max_n + 1)
    if any(tops[first:]):
        bad = first + tops[first:].index(True)
        raise MonotonicityViolation(
            f"{term}: top in A_{bad} but not in A_{first}")
    return Exactly(first - 1)


def equiv_index(t1: Term, t2: Term, max_n: int) -> CritIndex:
    """Least ``n <= max_n`` where the images differ (the terms then agree below
    ``gamma_m`` exactly for ``m < n``), else ``AtLeast(max_n+1)``."""
    for n in range(max_n + 1):
        if eval_term(t1, n) != eval_term(t2, n):
            return Exactly(n)
    return AtLeast(max_n + 1)


def critical_sequence(term: Term, length: int, max_n: int) -> list[CritIndex]:
    """``crit e, e(crit e), ...`` as indices, using ``e(gamma_k) = crit(e j_{2^k})``.
    Stops early at the first undetermined member."""
    out = [crit_index(term, max_n)]
    while len(out) < length and out[-1].exact:
        out.append(crit_index(Apply(term, j_sub(1 << out[-1].value)), max_n))
    return out


# ---------------------------------------------------------------- checks

@dataclass
class LDReport:
    n: int
    passed: bool
    checked: int
    exhaustive: bool
    counterexample: tuple[int, int, int] | None = None

    def to_dict(self) -> dict:
        return {"n": self.n, "passed": self.passed, "checked": self.checked,
                "exhaustive": self.exhaustive,
                "counterexample": list(self.counterexample) if self.counterexample else None}


def _ld_exhaustive_numpy(T: np.ndarray):
    T = T.astype(np.int64)
    for a in range(T.shape[0]):
        lhs = T[a][T]                       # a*(b*c)
        rhs = T[np.ix_(T[a], T[a])]         # (a*b)*(a*c)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            b, c = bad[0]
            return a, int(b), int(c)
    return -1, -1, -1


def check_left_distributivity(t: LaverTable, *, samples: int = 10**6, seed: int = 0,
                              exhaustive: bool | None = None) -> LDReport:
    """``a*(b*c) == (a*b)*(a*c)``; exhaustive for n <= 8, seeded sampling above."""
    if exhaustive is None:
        exhaustive = t.n <= 8
    T = t.array0()
    N = t.size
    if exhaustive:
        if HAVE_NUMBA:
            a, b, c = kernels.ld_violation_exhaustive(T)
        else:
            a, b, c = _ld_exhaustive_numpy(T)
        ok = a < 0
        return LDReport(t.n, ok, N ** 3, True, None if ok else (a + 1, b + 1, c + 1))
    rng = np.random.default_rng(seed)
    T64 = T.astype(np.int64)
    done = 0
    chunk = 1 << 18
    while done < samples:
        m = min(chunk, samples - done)
        a, b, c = (rng.integers(0, N, m) for _ in range(3))
        lhs = T64[a, T64[b, c]]
        rhs = T64[T64[a, b], T64[a, c]]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            i = bad[0]
            return LDReport(t.n, False, done + int(i) + 1, False,
                            (int(a[i]) + 1, int(b[i]) + 1, int(c[i]) + 1))
        done += m
    return LDReport(t.n, True, done, False)


def check_projection(n: int) -> tuple[bool, tuple[int, int] | None]:
    """Reduction mod 2^n is a homomorphism ``A_{n+1} -> A_n``.
    Returns ``(ok, first bad pair in A_{n+1})``."""
    big = build_table(n + 1).array0().astype(np.int64)
    small = build_table(n).array0().astype(np.int64)
    N = 1 << n
    idx = np.arange(2 * N) % N
    bad = np.argwhere(big % N != small[np.ix_(idx, idx)])
    if bad.size:
        a, b = bad[0]
        return False, (int(a) + 1, int(b) + 1)
    return True, None
