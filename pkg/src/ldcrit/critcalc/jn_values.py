"""Expected values of j_n on named ordinals, 1 <= n <= 16."""

from __future__ import annotations

GT = ">kappa4"

# critical sequence of j_n: crit(j_n) = CRIT_SEQ[n][0], j_n(s[k]) = s[k+1];
# a final ``GT`` means j_n moves the previous entry above kappa4
CRIT_SEQ: dict[int, list[str]] = {
    1: ["kappa0", "kappa1", "kappa2", "kappa3", "kappa4"],
    2: ["kappa1", "kappa2", "kappa3", "kappa4"],
    3: ["kappa0", "kappa2", "kappa3", "kappa4"],
    4: ["kappa2", "kappa2_5", "kappa3", "kappa4"],
    5: ["kappa0", "kappa1", "kappa2_5", "kappa4"],
    6: ["kappa1", "kappa2_5", "kappa2^5", GT],
    7: ["kappa0", "kappa2_5", "kappa2^6", "kappa3^6", GT],
    8: ["kappa2_5", "kappa3", "kappa2^7", "kappa3^7", GT],
    9: ["kappa0", "kappa1", "kappa2", "kappa2^7", GT],
    10: ["kappa1", "kappa2", "kappa2^7", "kappa3^9", GT],
    11: ["kappa0", "kappa2", "kappa2^7", "kappa3^10", GT],
    12: ["kappa2", "kappa3", "kappa2^7", "kappa3^11", GT],
    13: ["kappa0", "kappa1", "kappa3", "kappa2^7", GT],
    14: ["kappa1", "kappa3", "kappa2^13", "kappa2^7", GT],
    15: ["kappa0", "kappa3", "kappa2^14", "kappa2^13", GT],
    16: ["kappa3", "kappa1^15", "kappa2^15", "kappa2^14", GT],
}

# values off the critical sequence: n -> (argument, value)
OTHER: dict[int, tuple[str, str]] = {
    3: ("kappa1", "kappa2_5"),
    7: ("kappa1", "kappa3"),
    11: ("kappa1", "kappa3"),
}


def jname(n: int) -> str:
    return "j" if n == 1 else f"j{n}"


def cells(n: int) -> list[tuple[str, str]]:
    """``(cell id, relation text)`` for row ``n``; ids match the row scripts."""
    seq = CRIT_SEQ[n]
    j = jname(n)
    out = [("c0", f"crit({j}) = {seq[0]}")]
    for k in range(1, len(seq)):
        if seq[k] == GT:
            out.append((f"c{k}", f"kappa4 < {j}({seq[k - 1]})"))
        else:
            out.append((f"c{k}", f"{j}({seq[k - 1]}) = {seq[k]}"))
    if n in OTHER:
        y, w = OTHER[n]
        out.append(("o1", f"{j}({y}) = {w}"))
    return out
