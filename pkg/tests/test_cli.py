from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from ldcrit.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, run
from ldcrit.critcalc import corpus_dir


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_crit_example(capsys):
    code, out, _ = _run(capsys, "crit", "j16", "--max-n", "6")
    assert code == EXIT_OK and out.strip() == "gamma_4"


def test_growth_example(capsys):
    code, out, _ = _run(capsys, "growth", "Ctfunc[3,5](1)")
    assert code == EXIT_OK and out.strip() == "256"


def test_growth_compare(capsys):
    code, out, _ = _run(capsys, "growth", "F[5](1)", "F[4](253)")
    assert code == EXIT_OK and out.splitlines()[0] == "ProvenGT"


def test_compare_example(capsys):
    code, out, _ = _run(capsys, "compare", "j", "j", "--max-n", "5")
    assert code == EXIT_OK and out.strip() == "equal images through A_5"
    code, out, _ = _run(capsys, "compare", "j", "jj", "--max-n", "5")
    assert out.strip() == "images first differ in A_1"


def test_eval_and_table(capsys):
    code, out, _ = _run(capsys, "eval", "j o j", "--n", "2")
    assert code == EXIT_OK and out.strip() == "3"
    code, out, _ = _run(capsys, "table", "2")
    assert code == EXIT_OK
    assert out.splitlines()[0].split("|")[1].split() == ["2", "4", "2", "4"]
    assert "left distributivity: pass" in out


def test_usage_errors(capsys):
    assert _run(capsys, "crit", "j((")[0] == EXIT_USAGE
    assert _run(capsys, "crit", "nosuchname")[0] == EXIT_USAGE
    assert _run(capsys, "--bogus")[0] == EXIT_USAGE
    assert _run(capsys, "growth", "Ct[11](1)")[0] == EXIT_USAGE
    assert _run(capsys, "grid", "--caps", "1,2")[0] == EXIT_USAGE
    assert _run(capsys, "check", "/nonexistent.lds")[0] == EXIT_USAGE


def test_budget_exit(capsys):
    assert _run(capsys, "table", "13")[0] == EXIT_BUDGET
    assert _run(capsys, "crit", "j", "--max-n", "16")[0] == EXIT_BUDGET


def test_check_scripts(capsys, tmp_path):
    code, out, _ = _run(capsys, "check", str(corpus_dir() / "final-kappa4.lds"))
    assert code == EXIT_OK and "final-kappa4: pass" in out
    bad = tmp_path / "bad.lds"
    bad.write_text("script bad\nstep x: kappa1 < kappa0 by subst from d1, m1\nend\n")
    code, out, _ = _run(capsys, "check", str(bad))
    assert code == EXIT_FAIL and "bad: fail" in out


def test_corpus_override(capsys, tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(corpus_dir(), root)
    # without the script that proves the xi side condition the grid must stop
    (root / "mu-xi.lds").write_text("script mu-xi\nend\n")
    code, _, err = _run(capsys, "grid", "--caps", "2", "--corpus", str(root))
    assert code == EXIT_FAIL and "xi" in err
    (root / "mu-xi.lds").write_text("script mu-xi\nstep x: ??\nend\n")
    code, _, err = _run(capsys, "grid", "--caps", "2", "--corpus", str(root))
    assert code == EXIT_FAIL


def test_check_syntax_error_is_a_failure(capsys, tmp_path):
    bad = tmp_path / "broken.lds"
    bad.write_text("script broken\nstep x: kappa0 < by\n")
    code, out, _ = _run(capsys, "check", str(bad))
    assert code == EXIT_FAIL and "broken: fail" in out


def test_order_chains(capsys):
    code, out, _ = _run(capsys, "order")
    assert code == EXIT_OK
    assert "?" not in out
    code, out, _ = _run(capsys, "order", "kappa4", "mu")
    assert out.strip() == "kappa4 GT mu"


def test_grid_json(capsys, tmp_path):
    path = tmp_path / "grid.json"
    code, out, _ = _run(capsys, "grid", "--caps", "3", "--json", str(path))
    assert code == EXIT_OK and "audit: pass" in out
    rep = json.loads(path.read_text())
    assert rep["schema_version"] == 1
    assert rep["counts"]["fail"] == 0
    code, out, _ = _run(capsys, "grid", "--caps", "2", "--dump")
    assert json.loads(out)["audit"]["ok"]


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k not in ("timestamp", "runtime")}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def test_verify_all_json_is_deterministic(capsys, tmp_path):
    reps = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        code, out, _ = _run(capsys, "verify-all", "--json", str(path))
        assert code == EXIT_OK, out
        reps.append(json.loads(path.read_text()))
    assert "timestamp" in reps[0]
    assert _strip(reps[0]) == _strip(reps[1])
    ids = [r["id"] for r in reps[0]["records"]]
    assert [i.split(".")[0] for i in ids if i[0] == "c" and i[1:3].isdigit()] == \
        [f"c{n:02d}" for n in range(1, 12)]
    assert any(i.startswith("claim.") for i in ids)
    assert any(r["status"] == "claimed" for r in reps[0]["records"])


def test_console_script():
    cp = subprocess.run([sys.executable, "-m", "ldcrit.cli", "crit", "j8", "--max-n", "5"],
                        capture_output=True, text=True)
    assert cp.returncode == 0 and cp.stdout.strip() == "gamma_3"
