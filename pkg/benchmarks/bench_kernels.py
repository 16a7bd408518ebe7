"""Time the table kernels under numba and under the plain-Python fallback.

    python3 benchmarks/bench_kernels.py            # both backends
    python3 benchmarks/bench_kernels.py --single   # current backend only

The fallback is selected with LDCRIT_NO_NUMBA=1, so each backend runs in
its own interpreter.  Both must produce identical tables (checksums match).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time

import numpy as np

CASES = [("build_full", 8), ("build_full", 10), ("ld_exhaustive", 5), ("ld_exhaustive", 6),
         ("ensure_row", 10)]


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def run_single(repeat: int) -> dict:
    from ldcrit._accel import backend
    from ldcrit.laver import kernels
    out = {"backend": backend(), "cases": {}}
    for name, n in CASES:
        N = 1 << n
        T = np.zeros((N, N), dtype=np.uint16)
        if name == "build_full":
            kernels.build_full(T)                       # warm-up / compile
            secs = _time(lambda: kernels.build_full(T), repeat)
            digest = hashlib.sha256(T.tobytes()).hexdigest()[:16]
        elif name == "ld_exhaustive":
            kernels.build_full(T)
            kernels.ld_violation_exhaustive(T)
            secs = _time(lambda: kernels.ld_violation_exhaustive(T), repeat)
            digest = str(kernels.ld_violation_exhaustive(T))
        else:
            def fill():
                T[:] = 0
                done = np.zeros(N, dtype=np.bool_)
                kernels.ensure_row(T, done, 0)
            fill()
            secs = _time(fill, repeat)
            digest = hashlib.sha256(T.tobytes()).hexdigest()[:16]
        out["cases"][f"{name}/A_{n}"] = {"seconds": secs, "result": digest}
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--single", action="store_true", help="run the current backend only")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    if args.single:
        print(json.dumps(run_single(args.repeat)))
        return
    runs = {}
    for label, flag in (("numba", "0"), ("python", "1")):
        env = dict(os.environ, LDCRIT_NO_NUMBA=flag)
        cp = subprocess.run([sys.executable, __file__, "--single", "--repeat", str(args.repeat)],
                            env=env, capture_output=True, text=True, check=True)
        runs[label] = json.loads(cp.stdout.strip().splitlines()[-1])
    if args.json:
        print(json.dumps(runs, indent=2))
        return
    print(f"{'kernel':<22}{'numba s':>12}{'python s':>12}{'speedup':>10}  same result")
    for case in runs["numba"]["cases"]:
        a, b = runs["numba"]["cases"][case], runs["python"]["cases"][case]
        speed = b["seconds"] / a["seconds"] if a["seconds"] else float("inf")
        print(f"{case:<22}{a['seconds']:>12.5f}{b['seconds']:>12.5f}{speed:>9.0f}x  "
              f"{'yes' if a['result'] == b['result'] else 'NO'}")
    if runs["numba"]["backend"] != "numba":
        print("note: numba is unavailable, both columns ran the fallback")


if __name__ == "__main__":
    main()
