"""Hot loops for Laver tables.

Tables are stored 0-based: element ``a`` of ``A_n`` (1..2^n) lives at index
``a-1``, so the top element is ``N-1`` and its row is the identity.  The
defining recursion in this encoding is::

    T[x, 0]   = (x + 1) mod N
    T[x, b+1] = T[T[x, b], (x + 1) mod N]

and for ``x < N-1`` every entry of row ``x`` is strictly greater than ``x``,
so rows can be filled from the top down.
"""

import numpy as np

from .._accel import njit


@njit(cache=True)
def build_full(T):
    N = T.shape[0]
    for b in range(N):
        T[N - 1, b] = b
    for x in range(N - 2, -1, -1):
        nxt = x + 1
        T[x, 0] = nxt
        for b in range(N - 1):
            T[x, b + 1] = T[T[x, b], nxt]


@njit(cache=True)
def ensure_row(T, done, a):
    """Fill row ``a`` (and every row it depends on) on demand.

    ``done`` marks finished rows.  An explicit stack replaces recursion; each
    row keeps its progress in ``pos`` so nothing is recomputed.
    Returns the number of rows filled.
    """
    N = T.shape[0]
    if done[a]:
        return 0
    filled = 0
    pos = np.zeros(N, np.int64)
    stack = np.empty(N, np.int64)
    sp = 0
    stack[sp] = a
    sp += 1
    while sp > 0:
        x = stack[sp - 1]
        if done[x]:
            sp -= 1
            continue
        if x == N - 1:
            for b in range(N):
                T[x, b] = b
            done[x] = True
            filled += 1
            sp -= 1
            continue
        nxt = x + 1
        b = pos[x]
        if b == 0:
            T[x, 0] = nxt
        blocked = False
        while b < N - 1:
            y = T[x, b]
            if not done[y]:
                stack[sp] = y
                sp += 1
                blocked = True
                break
            T[x, b + 1] = T[y, nxt]
            b += 1
        pos[x] = b
        if not blocked:
            done[x] = True
            filled += 1
            sp -= 1
    return filled


@njit(cache=True)
def ld_violation_exhaustive(T):
    """First (a, b, c) with a*(b*c) != (a*b)*(a*c), 0-based, or (-1,-1,-1)."""
    N = T.shape[0]
    for a in range(N):
        for b in range(N):
            ab = T[a, b]
            for c in range(N):
                if T[a, T[b, c]] != T[ab, T[a, c]]:
                    return a, b, c
    return -1, -1, -1


@njit(cache=True)
def row_period(row):
    N = row.shape[0]
    p = 1
    while p < N:
        if N % p == 0:
            ok = True
            for i in range(p, N):
                if row[i] != row[i - p]:
                    ok = False
                    break
            if ok:
                return p
        p += 1
    return N
