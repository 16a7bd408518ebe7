"""The bundled proof scripts and a loader that checks them in order."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .checker import FactStore, ScriptResult, check_script, parse_script
from .errors import ScriptSyntaxError

CORPUS_ORDER: list[str] = (
    ["prelude", "ejjj"]
    + [f"jn-values/row{n:02d}" for n in range(1, 17)]
    + ["ordering", "approx", "sigma", "ej-twice", "skip6", "skip9",
       "ordering-complete", "mu-xi", "final-kappa4"]
)

# the 17 named ordinals through kappa4, in increasing order
CHAIN17 = ["kappa0", "kappa1", "kappa2", "kappa2_5", "kappa3", "kappa1^15", "kappa2^15",
           "kappa2_5^15", "kappa2^14", "kappa2_5^14", "kappa2^13", "kappa2_5^13",
           "kappa2^7", "kappa2^6", "kappa2^5", "kappa4", "kappa3^5"]

# the list from kappa2^7 on, including kappa3^n for 6 <= n <= 11
CHAIN_FROM_MU = ["kappa2^7", "kappa2_5^11", "kappa3^11", "kappa2_5^10", "kappa3^10",
                 "kappa2_5^9", "kappa3^9", "kappa2^6", "kappa3^7", "kappa2^5", "kappa3^6",
                 "kappa4", "kappa3^5"]


def corpus_dir() -> Path:
    return Path(str(resources.files(__package__) / "corpus"))


def corpus_text(name: str) -> str:
    return (corpus_dir() / f"{name}.lds").read_text()


def load_corpus(names=None, store: FactStore | None = None, *, strict: bool = False,
                directory=None) -> tuple[FactStore, list[ScriptResult]]:
    """Check the bundled scripts (all of them by default, in dependency order).
    ``directory`` replaces the bundled corpus directory (same layout)."""
    store = FactStore() if store is None else store
    root = Path(directory) if directory is not None else corpus_dir()
    results = []
    for name in names or CORPUS_ORDER:
        path = root / f"{name}.lds"
        try:
            script = parse_script(path.read_text(), path.name)
        except ScriptSyntaxError as exc:
            if strict:
                raise
            results.append(ScriptResult(path.stem, path.name, False, [], [], exc))
            continue
        results.append(check_script(script, store, strict=strict))
    return store, results
