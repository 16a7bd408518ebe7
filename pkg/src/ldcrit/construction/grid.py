"""The twelve-column construction of embeddings and their critical points.

Column ``n`` is extended by applying the entries of column ``n + 1`` (one
block per consumed entry) to entries of column ``HAT[n]``.  All columns are
infinite lazily; a grid materialises capped prefixes.  Block sizes are
computed operationally by simulating the lower columns, independently of the
closed recursions in :mod:`ldcrit.growth`, which the audit compares against.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import lru_cache

from ..critcalc.syntax import AppO, Const
from ..term import Apply, Gen, PRELUDE_NAMES, Term

HAT = (0, 1, 1, 3, 1, 3, 6, 1, 8, 1, 3, 6)
NCOLS = 12                     # columns 0..11; "column 12" is the single k''
DOUBLING = frozenset(n for n in range(NCOLS) if HAT[n] == n)

J = Gen()
K = PRELUDE_NAMES.lookup("k")
K1 = PRELUDE_NAMES.lookup("k'")
K2 = PRELUDE_NAMES.lookup("k''")

SEEDS: dict[int, Term] = {0: J, 1: J, 3: J, 6: K, 8: K1}
# critical point moved by each seed, i.e. a(n, 0) for the seeded columns
SEED_LABELS = {0: Const("kappa0"), 1: Const("kappa1"), 3: Const("kappa2"),
               6: Const("mu"), 8: Const("nu")}

# counts saturate here; anything this large is beyond every cap
SAT = 1 << 62


class ConstructionError(Exception):
    pass


class MissingSideCondition(ConstructionError):
    pass


def _sub(a: int, b: int) -> int:
    return SAT if a >= SAT or b >= SAT else a - b


def _add(a: int, b: int) -> int:
    return min(SAT, a + b)


@lru_cache(maxsize=None)
def derived(low: int, high: int, length: int) -> int:
    """Entries obtainable in column ``low`` from ``length`` entries of column
    ``high`` by running the columns in between (saturating at SAT)."""
    for col in range(high - 1, low - 1, -1):
        length = produced(col, length)
    return length


def block_plan(n: int, m: int, before: int) -> tuple[int, int]:
    """``(size, first source index)`` of the block that entry ``m`` of column
    ``n + 1`` contributes, given ``before`` entries already in column n."""
    if n in DOUBLING:
        return before, 0
    if n == 2:
        return derived(1, 2, before), 0
    if n == 4:
        if m == 0:
            return derived(1, 4, 1), 0
        return _sub(derived(1, 4, before), 1), 1
    if n == 5:
        if m == 0:
            return derived(3, 4, 1), 0
        return derived(3, 5, before), 0
    if n == 7:
        return _sub(derived(1, 7, before), 8), 8
    if n == 9:
        base = derived(1, 6, 1)
        if m == 0:
            return _sub(derived(1, 9, _sub(base, 8)), 8), 8
        return _sub(derived(1, 9, before), base), base
    if n == 10:
        return derived(3, 10, before), 0
    if n == 11:
        return SAT, 0
    raise ValueError(n)


@lru_cache(maxsize=None)
def produced(n: int, consumed: int) -> int:
    """Length of column n after consuming ``consumed`` entries of column n+1."""
    length = 1 if n in DOUBLING else 0
    for m in range(consumed):
        if length >= SAT:
            return SAT
        size, _ = block_plan(n, m, length)
        length = _add(length, size)
    return length


class Lazy:
    """Memoised entries ``e(n, i)`` and labels ``a(n, i)`` of the infinite columns."""

    def __init__(self):
        self._starts: dict[int, list[int]] = {}
        self._terms: dict[tuple[int, int], Term] = {}
        self._labels: dict[tuple[int, int], object] = {}

    def starts(self, n: int, upto: int) -> list[int]:
        """Block start offsets of column n, extended until one exceeds ``upto``."""
        st = self._starts.setdefault(n, [1 if n in DOUBLING else 0])
        while st[-1] <= upto and st[-1] < SAT:
            m = len(st) - 1
            size, _ = block_plan(n, m, st[-1])
            st.append(_add(st[-1], size))
        return st

    def locate(self, n: int, i: int) -> tuple[int, int] | None:
        """``(block, source index)`` of position i; None for a seed."""
        if n == 11:
            return 0, i
        if n in DOUBLING and i == 0:
            return None
        st = self.starts(n, i)
        m = max(b for b in range(len(st) - 1) if st[b] <= i)
        _, first = block_plan(n, m, st[m])
        return m, first + (i - st[m])

    def source(self, n: int) -> int:
        return HAT[n]

    def maker(self, n: int, m: int) -> Term:
        return K2 if n == 11 else self.term(n + 1, m)

    def term(self, n: int, i: int) -> Term:
        key = (n, i)
        t = self._terms.get(key)
        if t is None:
            loc = self.locate(n, i)
            if loc is None:
                t = SEEDS[n]
            else:
                m, r = loc
                t = Apply(self.maker(n, m), self.term(self.source(n), r))
            self._terms[key] = t
        return t

    def label(self, n: int, i: int):
        """``a(n, i)``: the point entry i of column n moves to ``a(n, i + 1)``."""
        key = (n, i)
        lab = self._labels.get(key)
        if lab is None:
            loc = self.locate(n, i)
            if loc is None:
                lab = SEED_LABELS[n]
            else:
                m, r = loc
                lab = AppO(self.maker(n, m), self.label(self.source(n), r))
            self._labels[key] = lab
        return lab


@dataclass
class Entry:
    index: int
    term: Term
    block: int | None          # consumed entry of column n+1; None for a seed
    source: int | None         # index in column HAT[n]


@dataclass
class GridState:
    caps: dict[int, int]
    columns: dict[int, list[Entry]] = field(default_factory=dict)
    consumed: dict[int, int] = field(default_factory=dict)
    truncated: dict[int, bool] = field(default_factory=dict)
    lazy: Lazy = field(default_factory=Lazy, repr=False)
    singleton: Term = K2

    def label(self, n: int, i: int):
        return self.lazy.label(n, i)

    def length(self, n: int) -> int:
        return len(self.columns[n])

    def terms(self, n: int) -> list[Term]:
        return [e.term for e in self.columns[n]]


def normalize_caps(caps) -> dict[int, int]:
    if isinstance(caps, int):
        caps = {n: caps for n in range(NCOLS)}
    out = {n: int(caps.get(n, caps.get(str(n), 0)) if isinstance(caps, dict) else caps[n])
           for n in range(NCOLS)}
    for n, c in out.items():
        if c < 0:
            raise ValueError(f"cap for column {n} is negative")
        if n in SEEDS and c < 1:
            raise ValueError(f"column {n} has a seed and needs cap >= 1")
    return out


def init_grid(caps) -> GridState:
    caps = normalize_caps(caps)
    st = GridState(caps)
    for n in range(NCOLS):
        st.columns[n] = [Entry(0, SEEDS[n], None, None)] if n in SEEDS else []
        st.consumed[n] = 0
        st.truncated[n] = False
    return st


# side conditions each recipe relies on, as (columns, relation text)
SIDE_CONDITIONS = [
    ((4, 5), "k(j)(kappa1) = kappa3"),
    ((9, 10), "k''(k)(j)(mu) = xi"),
]


def check_side_conditions(store, columns) -> list[str]:
    """Relation texts among SIDE_CONDITIONS that the fact store lacks."""
    from ..critcalc.syntax import parse_relation
    missing = []
    for cols, text in SIDE_CONDITIONS:
        if set(cols) & set(columns) and store.find(parse_relation(text)) is None:
            missing.append(text)
    return missing


def extend_column(state: GridState, n: int, store=None) -> bool:
    """Consume the next entry of column n + 1 (the single k'' for column 11)
    and append its block, up to the cap.  Returns whether anything changed."""
    col = state.columns[n]
    cap = state.caps[n]
    if state.truncated[n] or len(col) >= cap:
        if len(col) >= cap and not state.truncated[n] and _has_more(state, n):
            state.truncated[n] = True
        return False
    m = state.consumed[n]
    if n < NCOLS - 1 and m >= len(state.columns[n + 1]):
        return False
    if store is not None and n in (4, 5, 9, 10):
        missing = check_side_conditions(store, [n])
        if missing:
            raise MissingSideCondition(f"column {n} needs {missing[0]}")
    lz = state.lazy
    start = len(col)
    size, first = block_plan(n, m, start)
    end = _add(start, size)
    for i in range(start, min(end, cap)):
        loc = lz.locate(n, i)
        col.append(Entry(i, lz.term(n, i), loc[0], loc[1]))
    state.consumed[n] = m + 1
    if end > cap:
        state.truncated[n] = True
    return True


def _has_more(state: GridState, n: int) -> bool:
    if n == NCOLS - 1:
        return True
    m = state.consumed[n]
    st = state.lazy.starts(n, len(state.columns[n]))
    return len(state.columns[n]) < SAT and (m < len(state.columns[n + 1]) or st[min(m, len(st) - 1)] > len(state.columns[n]))


def run_grid(caps, store=None) -> GridState:
    """Extend every column to a fixed point under the caps."""
    state = init_grid(caps)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        changed = True
        while changed:
            changed = False
            for n in range(NCOLS - 1, -1, -1):
                while extend_column(state, n, store):
                    changed = True
    finally:
        sys.setrecursionlimit(old)
    return state
