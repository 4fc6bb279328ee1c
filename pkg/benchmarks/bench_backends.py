"""Time the Fock-space kernels under both rational backends.

The backend is fixed at import time, so each one runs in its own
interpreter. Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
from fractions import Fraction
from virc1 import _exact, fock
from virc1.verify import check_commutators, check_twisted_trace, check_sugawara

def timed(fn):
    best = float("inf")
    for _ in range(REPEAT):
        fock._vertex_on_state.cache_clear(); fock._b_on_state.cache_clear()
        fock._l_on_state.cache_clear(); fock._creation_expansion.cache_clear()
        start = time.perf_counter()
        report = fn()
        best = min(best, time.perf_counter() - start)
    assert report.passed, report
    return best

out = {
    "backend": _exact.BACKEND,
    "commutators w=2 E=10": timed(lambda: check_commutators(2, 10)),
    "sugawara w=2 E=10": timed(lambda: check_sugawara(2, 10, max_energy=8)),
    "twisted q=3/2 nu=2 N=12": timed(lambda: check_twisted_trace(Fraction(3, 2), 2, 12)),
}
json.dump(out, sys.stdout)
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("VIRC1_PURE_PYTHON", None)
    if pure:
        env["VIRC1_PURE_PYTHON"] = "1"
    code = f"REPEAT = {repeat}\n" + WORKLOAD
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if fast["backend"] == slow["backend"]:
        print("gmpy2 not importable; both runs used Fraction")
    print(f"{'workload':<26} {fast['backend']:>10} {slow['backend']:>10} {'ratio':>7}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:<26} {fast[key]:>9.3f}s {slow[key]:>9.3f}s {slow[key] / fast[key]:>6.1f}x")


if __name__ == "__main__":
    main()
