"""Exact evaluation of F_k, Ct_N and Ctfunc under a bit budget.

Values whose bit length would exceed the budget are returned symbolically."""

from __future__ import annotations

import os
from functools import lru_cache

from .expr import BoundExpr, CtApp, CtChain, FApp, Num

DEFAULT_BUDGET_BITS = int(os.environ.get("LDCRIT_BUDGET_BITS", 1 << 20))

# Ct_N(m) = 2^m for these N
POW_COLUMNS = frozenset({0, 1, 3, 6, 8})
MAX_COLUMN = 10
# Ct_n(1) for the columns whose recursion starts at m = 1
CT_INITIAL = {4: 8, 5: 2}


class Overflow(Exception):
    """An intermediate value exceeded the bit budget."""


class UndefinedColumn(ValueError):
    pass


def _check(v: int, budget: int) -> int:
    if v.bit_length() > budget:
        raise Overflow(v.bit_length())
    return v


def _pow2(x: int, budget: int) -> int:
    if x < 0:
        raise ValueError("negative exponent")
    if x + 1 > budget:
        raise Overflow(x + 1)
    return 1 << x


@lru_cache(maxsize=None)
def _f(k: int, m: int, budget: int) -> int:
    if k == 0:
        return _check(m + 1, budget)
    if k == 1:
        return _check(m + 2, budget)
    if k == 2:
        return _check(2 * m + 3, budget)
    if k == 3:
        return _pow2(m + 3, budget) - 3
    v = _f(k - 1, 1, budget)
    for _ in range(m):
        v = _f(k - 1, v, budget)
    return v


def f_exact(k: int, m: int, budget: int = DEFAULT_BUDGET_BITS) -> int:
    """F(k, m); raises Overflow past the budget."""
    if k < 0 or m < 0:
        raise ValueError("F is defined on natural numbers")
    return _f(k, m, budget)


def _check_column(n: int) -> None:
    if not 0 <= n <= MAX_COLUMN:
        raise UndefinedColumn(f"Ct_{n} is not defined (columns 0..{MAX_COLUMN})")


@lru_cache(maxsize=None)
def _ct(n: int, m: int, budget: int) -> int:
    if n in POW_COLUMNS:
        return _pow2(m, budget)
    if m == 0:
        return 0
    if n == 2:
        v = 0
        for _ in range(m):
            v = _check(v + _pow2(v, budget), budget)
        return v
    # the remaining columns recurse on m; iterate upward to keep the stack flat
    if n == 4:
        v = CT_INITIAL[4]
        for _ in range(1, m):
            v = _check(v + _chain(1, 4, v, budget) - 1, budget)
        return v
    if n == 5:
        v = CT_INITIAL[5]
        for _ in range(1, m):
            v = _check(v + _chain(3, 5, v, budget), budget)
        return v
    if n == 7:
        v = 0
        for _ in range(m):
            v = _check(v + _chain(1, 7, v, budget) - 8, budget)
        return v
    if n == 9:
        base = _chain(1, 6, 1, budget)
        v = _check(_chain(1, 9, base - 8, budget) - 8, budget)
        for _ in range(1, m):
            v = _check(v + _chain(1, 9, v, budget) - base, budget)
        return v
    if n == 10:
        v = 0
        for _ in range(m):
            v = _check(v + _chain(3, 10, v, budget), budget)
        return v
    raise UndefinedColumn(n)


def _chain(n: int, m: int, x: int, budget: int) -> int:
    for col in range(m - 1, n - 1, -1):
        x = _ct(col, x, budget)
    return x


def ct_exact(n: int, m: int, budget: int = DEFAULT_BUDGET_BITS) -> int:
    """Ct_N(m); raises Overflow past the budget."""
    _check_column(n)
    if m < 0:
        raise ValueError("Ct is defined on natural numbers")
    return _ct(n, m, budget)


def ctfunc_exact(n: int, m: int, x: int, budget: int = DEFAULT_BUDGET_BITS) -> int:
    """Ct_N(Ct_{N+1}(...Ct_{M-1}(x))); the identity when N == M."""
    if not 0 <= n <= m:
        raise ValueError(f"Ctfunc needs 0 <= N <= M, got {n}, {m}")
    if m > n:
        _check_column(m - 1)
    return _chain(n, m, x, budget)


def F(k: int, m: int, budget: int = DEFAULT_BUDGET_BITS) -> int | BoundExpr:
    """F(k, m) as an int, or the symbolic application when it is too large."""
    try:
        return f_exact(k, m, budget)
    except Overflow:
        return FApp(k, Num(m))


def Ct(n: int, m: int, budget: int = DEFAULT_BUDGET_BITS) -> int | BoundExpr:
    try:
        return ct_exact(n, m, budget)
    except Overflow:
        return CtApp(n, Num(m))


def Ctfunc(n: int, m: int, x: int, budget: int = DEFAULT_BUDGET_BITS) -> int | BoundExpr:
    try:
        return ctfunc_exact(n, m, x, budget)
    except Overflow:
        return CtChain(n, m, Num(x))


def is_symbolic(v) -> bool:
    return isinstance(v, BoundExpr)
