"""The order closure of proven ordinal facts."""

from __future__ import annotations

import enum
from collections import defaultdict

from .syntax import EqO, LeO, LtO


class Order(enum.Enum):
    LT = "<"
    EQ = "="
    GT = ">"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


class OrderGraph:
    """Directed graph with ``a -> b`` for ``a <= b``; strict edges are flagged.
    Equalities add both directions."""

    def __init__(self):
        self.succ: dict = defaultdict(dict)

    def copy(self) -> "OrderGraph":
        g = OrderGraph()
        for a, nbrs in self.succ.items():
            g.succ[a] = dict(nbrs)
        return g

    def _edge(self, a, b, strict: bool):
        cur = self.succ[a].get(b)
        if cur is None or (strict and not cur):
            self.succ[a][b] = strict

    def reach(self, a) -> dict:
        """Every node reachable from ``a`` mapped to whether some path is strict."""
        best = {a: False}
        todo = [(a, False)]
        while todo:
            node, strict = todo.pop()
            for b, s in self.succ.get(node, {}).items():
                st = strict or s
                old = best.get(b)
                if old is None or (st and not old):
                    best[b] = st
                    todo.append((b, st))
        return best

    def add(self, rel) -> tuple | None:
        """Insert an order fact.  Returns a witness pair when it closes a
        strict cycle (the edge is still recorded)."""
        if isinstance(rel, EqO):
            edges = [(rel.lhs, rel.rhs, False), (rel.rhs, rel.lhs, False)]
        elif isinstance(rel, LtO):
            edges = [(rel.lhs, rel.rhs, True)]
        elif isinstance(rel, LeO):
            edges = [(rel.lhs, rel.rhs, False)]
        else:
            return None
        for a, b, s in edges:
            self._edge(a, b, s)
        for a, b, s in edges:
            back = self.reach(b)
            if a in back and (s or back[a]):
                return (a, b)
        return None

    def compare(self, a, b) -> Order:
        if a == b:
            return Order.EQ
        fwd = self.reach(a)
        if b in fwd and fwd[b]:
            return Order.LT
        bwd = self.reach(b)
        if a in bwd and bwd[a]:
            return Order.GT
        if b in fwd and a in bwd:
            return Order.EQ
        return Order.UNKNOWN

    def nodes(self):
        out = set(self.succ)
        for nbrs in self.succ.values():
            out |= set(nbrs)
        return out
