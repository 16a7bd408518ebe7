"""Generate the per-row scripts for the j_n value table (rows 1..16).

Every cell ``j_n(v) = w`` is derived the same way: write ``v = j_{n-1}(y)``
from row n-1, then ``j_n(j_{n-1}(y)) = j_{n-1}(j(y))`` and look ``j(y)`` up
in row n-1 again.  The generator checks each derived value against the
expected table before writing anything.

Run from the repository root:  python3 tools/gen_jn_values.py
"""

from __future__ import annotations

from pathlib import Path

from ldcrit.critcalc.syntax import parse_ord
from ldcrit.critcalc.jn_values import CRIT_SEQ, GT, OTHER

OUT = Path(__file__).resolve().parents[1] / "src/ldcrit/critcalc/corpus/jn-values"

ROWS = CRIT_SEQ

ORDER = ["kappa0", "kappa1", "kappa2", "kappa2_5", "kappa3", "kappa4"]
NEXT = {"kappa0": ("kappa1", "d1"), "kappa1": ("kappa2", "d2"),
        "kappa2": ("kappa3", "d3"), "kappa3": ("kappa4", "d4")}
ADJ = {("kappa0", "kappa1"): "lt01", ("kappa1", "kappa2"): "lt12", ("kappa2", "kappa3"): "lt23",
       ("kappa3", "kappa4"): "lt34", ("kappa2", "kappa2_5"): "row04.lt_a",
       ("kappa2_5", "kappa3"): "row04.lt_b"}


def canon(text: str) -> str:
    return str(parse_ord(text))


def jt(m: int) -> str:
    return "j" if m == 1 else f"j{m}"


def app(m: int, x: str) -> str:
    return canon(f"{jt(m)}({x})")


def chain(a: str, b: str) -> list[str]:
    """Adjacent-order facts for a < b between named kappas."""
    i, k = ORDER.index(a), ORDER.index(b)
    assert i < k, (a, b)
    nodes = [x for x in ORDER[i:k + 1] if x != "kappa2_5" or x in (a, b)]
    return [ADJ[(x, y)] for x, y in zip(nodes, nodes[1:])]


class Row:
    def __init__(self, n: int):
        self.n = n
        self.lines: list[str] = []
        self.goals: list[str] = []
        self.values: dict[str, tuple[str, str | None]] = {}  # y -> (j_n(y), fact ref or None)

    def step(self, sid, rel, rule, prem=(), with_=None):
        s = f"step {sid}: {rel} by {rule}"
        if prem:
            s += " from " + ", ".join(prem)
        if with_:
            s += " with " + with_
        self.lines.append(s)
        return sid


def build():
    rows: dict[int, Row] = {}
    for n, cells in ROWS.items():
        row = Row(n)
        rows[n] = row
        q = f"row{n:02d}"
        if n == 1:
            row.step("c0", "crit(j) = kappa0", "trans", ["d0"])
            for k, y in enumerate(cells[:-1]):
                z, d = NEXT[y]
                row.step(f"c{k + 1}", f"j({y}) = {z}", "trans", [d])
        else:
            m = n - 1
            prev = rows[m]
            fixes: dict[str, str] = {}

            def value(y, derive=True):
                """(j_m(y), ref) with ref None for pure notation; derives fixed points."""
                if y in prev.values:
                    return prev.values[y]
                crit = prev.values["@crit"][0]
                if crit in ORDER and ORDER.index(y) < ORDER.index(crit):
                    if derive and y not in fixes:
                        lt = row.step(f"lt_{m}_{y}", f"{y} < crit({jt(m)})", "trans",
                                      [f"row{m:02d}.c0"] + chain(y, crit))
                        fixes[y] = row.step(f"fx_{m}_{y}", f"{jt(m)}({y}) = {y}", "below_crit", [lt])
                    return y, fixes.get(y)
                return app(m, y), None

            def preimage(v):
                for y in ORDER[:-1]:
                    if value(y, derive=False)[0] == v:
                        return y
                raise AssertionError(f"row {n}: no preimage of {v} under {jt(m)}")

            def cell(sid, v, expect=None):
                """j_n(v) = w via j_n(j_m(y)) = j_m(j(y))."""
                y = preimage(v)
                _, fref = value(y)
                z, dz = NEXT[y]
                w, gref = value(z)
                if expect is not None and expect != GT:
                    assert w == canon(expect), (n, v, w, expect)
                prem = []
                if fref is not None:
                    prem.append(row.step(f"{sid}_v", f"{app(n, v)} = {jt(n)}({jt(m)}({y}))", "cong", [fref]))
                prem.append(row.step(f"{sid}_r", f"{jt(n)}({jt(m)}({y})) = {jt(m)}(j({y}))", "app_app"))
                prem.append(row.step(f"{sid}_d", f"{jt(m)}(j({y})) = {app(m, z)}", "cong", [dz]))
                if gref is not None:
                    prem.append(gref)
                row.step(sid, f"{app(n, v)} = {w}", "trans", prem)
                return w

            # critical point
            c0 = canon(cells[0])
            w, ref = value("kappa0")
            assert w == c0, (n, w, c0)
            prem = [row.step("c0_r", f"crit({jt(n)}) = {jt(m)}(crit(j))", "crit_app"),
                    row.step("c0_d", f"{jt(m)}(crit(j)) = {app(m, 'kappa0')}", "cong", ["d0"])]
            if ref is not None:
                prem.append(ref)
            row.step("c0", f"crit({jt(n)}) = {c0}", "trans", prem)
            for k in range(1, len(cells)):
                if cells[k] == GT:
                    v = canon(cells[k - 1])
                    sid = f"c{k}"
                    if n == 6:
                        # j6(kappa2^5) = kappa3^5 > kappa2_5^5 = kappa4
                        eq = cell(f"{sid}_eq", v)
                        mono = row.step(f"{sid}_m", f"j5(kappa2_5) < {eq}", "monotone", ["row04.lt_b"])
                        row.step(sid, f"kappa4 < {app(n, v)}", "trans", ["row05.c3", mono, f"{sid}_eq"])
                    else:
                        cell(f"{sid}_eq", v)
                        crit = rows[m].values["@crit"][0]
                        le = row.step(f"{sid}_c", f"crit({jt(m)}) < kappa4", "trans",
                                      [f"row{m:02d}.c0"] + chain(crit, "kappa4"))
                        up = row.step(f"{sid}_a", f"kappa4 < {app(m, 'kappa4')}", "above_crit", [le])
                        row.step(sid, f"kappa4 < {app(n, v)}", "trans", [up, f"{sid}_eq"])
                    row.goals.append(sid)
                    continue
                cell(f"c{k}", canon(cells[k - 1]), cells[k])
        row.goals.insert(0, "c0")
        for k in range(1, len(cells)):
            if cells[k] != GT:
                row.goals.append(f"c{k}")
                row.values[canon(cells[k - 1])] = (canon(cells[k]), f"{q}.c{k}")
        row.values["@crit"] = (canon(cells[0]), f"{q}.c0")
        if n in OTHER:
            y, w = OTHER[n]
            if n == 3:
                row.step("o1", f"j3({y}) = {w}", "trans", ["d25"])
            else:
                e = {7: "j4", 11: "j8"}[n]
                src = {7: ["row04.c0"], 11: ["row08.c0", "row04.lt_a"]}[n]
                rule = "weaken" if n == 7 else "trans"
                h = row.step("o1_h", f"kappa2 <= crit({e})", rule, src)
                inst = row.step("o1_l", f"{app(n, y)} = {e}(kappa2_5)", "inst", ["ejjj.g", h], f"e={e}")
                back = {7: "row04.c2", 11: "row08.c1"}[n]
                row.step("o1", f"{app(n, y)} = {w}", "trans", [inst, back])
            row.goals.append("o1")
            row.values[y] = (canon(w), f"{q}.o1")
        if n == 4:
            row.step("lt_a0", "kappa2 < j4(kappa2)", "above_crit", ["c0"])
            row.step("lt_a", "kappa2 < kappa2_5", "subst", ["c1", "lt_a0"])
            row.step("lt_b1", "crit(j4) < kappa2_5", "trans", ["c0", "lt_a"])
            row.step("lt_b0", "kappa2_5 < j4(kappa2_5)", "above_crit", ["lt_b1"])
            row.step("lt_b", "kappa2_5 < kappa3", "subst", ["c2", "lt_b0"])
            row.goals += ["lt_a", "lt_b"]
    return rows


def render(n: int, row: Row) -> str:
    cells = " -> ".join(ROWS[n])
    head = [f"# Values of j{n}: critical sequence {cells}",
            f"# (generated by tools/gen_jn_values.py)", f"script row{n:02d}"]
    return "\n".join(head + row.lines + ["goal " + ", ".join(row.goals), "end", ""])


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for n, row in build().items():
        (OUT / f"row{n:02d}.lds").write_text(render(n, row))
    print(f"wrote {len(ROWS)} scripts to {OUT}")


if __name__ == "__main__":
    main()
