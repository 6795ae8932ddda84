"""Compare the compiled and pure-Python rational elimination kernels.

Runs two workloads through both backends:

* random sparse rational matrices through ``echelon`` directly;
* the bigraded Hochschild cohomology grid of the quiver algebra computed
  from the reduced cochain complex, whose ranks all go through the kernel.

The whole-pipeline timing is taken in a subprocess per backend so that the
FLUX_PURE_PYTHON switch is honoured at import, exactly as for users.

    python3 benchmarks/bench_linalg.py [--size 60] [--repeat 3]
"""
from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from flux import linalg

PIPELINE = """
import json, time
from flux import linalg
from flux.quiver_hh import formal_structure, hh_direct, quiver_q
ops = formal_structure(quiver_q())
t = time.perf_counter()
for i in range(7):
    for j in range(-4, 2):
        hh_direct(ops, i + j, i=i)
print(json.dumps({"backend": linalg.BACKEND, "seconds": time.perf_counter() - t}))
"""


def random_matrix(rows: int, cols: int, density: float, rng: random.Random) -> list[dict]:
    out = []
    for _ in range(rows):
        out.append({c: Fraction(rng.randint(-9, 9), rng.randint(1, 6))
                    for c in range(cols) if rng.random() < density})
    return out


def time_kernel(backend: str, mats: list[list[dict]], repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for m in mats:
            linalg.echelon([dict(r) for r in m], backend=backend)
        best = min(best, time.perf_counter() - t)
    return best


def time_pipeline(pure: bool) -> dict:
    env = dict(os.environ)
    env.pop("FLUX_PURE_PYTHON", None)
    if pure:
        env["FLUX_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, "-c", PIPELINE], env=env, check=True,
                         capture_output=True, text=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=60)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    mats = [random_matrix(args.size, args.size, 0.3, rng) for _ in range(args.count)]
    report = {"compiled_available": linalg._c_echelon is not None}
    py = time_kernel("python", mats, args.repeat)
    report["echelon_python_s"] = round(py, 4)
    if linalg._c_echelon is not None:
        for m in mats:
            assert linalg.echelon([dict(r) for r in m], "compiled") == \
                linalg.echelon([dict(r) for r in m], "python")
        c = time_kernel("compiled", mats, args.repeat)
        report["echelon_compiled_s"] = round(c, 4)
        report["echelon_speedup"] = round(py / c, 2)
    pure = time_pipeline(True)
    comp = time_pipeline(False)
    report["hh_grid_python_s"] = round(pure["seconds"], 3)
    report[f"hh_grid_{comp['backend']}_s"] = round(comp["seconds"], 3)
    print(json.dumps(report, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
