"""Compare the compiled kernels with the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Times each kernel on workloads shaped like the verification suites, checks
that both backends agree, and times one full suite run per backend in a
subprocess (the backend is fixed at import).
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from qse import _kernels
from qse._kernels import _fallback
from qse.sampling import random_density, random_spectrum, random_unitaries, trial_rng

SUITE_SNIPPET = (
    "import time; from qse import suites, BACKEND; t=time.perf_counter(); "
    "suites.theorem1_suite(ds=(2, 3), trials=20); suites.additivity_suite(ds=(2, 3), trials=(40, 10)); "
    "print(BACKEND, time.perf_counter()-t)"
)


def workloads(rng):
    grid_q = np.repeat([0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0], 7)
    grid_s = np.tile([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0], 7)
    k = 9
    g = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    pi = g @ g.conj().T
    ops = (rng.normal(size=(k, 3, 3)) + 1j * rng.normal(size=(k, 3, 3)))
    return {
        "unified_entropy_grid (n=9, 49 points)": ("unified_entropy_grid", (random_spectrum(9, rng), grid_q, grid_s)),
        "unified_entropy_grid (n=81, 49 points)": ("unified_entropy_grid", (random_spectrum(81, rng), grid_q, grid_s)),
        "gram_diagonals (k=4, 100 unitaries)": ("gram_diagonals", (pi[:4, :4], random_unitaries(100, 4, rng))),
        "gram_diagonals (k=9, 100 unitaries)": ("gram_diagonals", (pi, random_unitaries(100, k, rng))),
        "effect_gram (k=9, d=3)": ("effect_gram", (ops, random_density(3, rng))),
    }


def time_call(fn, args, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(lambda: fn(*args), number=1), 1e-7)))
    best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number
    return best


def suite_time(pure: bool) -> float:
    env = dict(os.environ)
    env.pop("QSE_PURE_PYTHON", None)
    if pure:
        env["QSE_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", SUITE_SNIPPET], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.split()[1])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", dest="json_path", default=None)
    args = parser.parse_args(argv)

    compiled = _kernels.compiled
    if compiled is None:
        print("compiled kernels are not built; only the fallback is available")
    rng = trial_rng(2024)
    rows = []
    print(f"{'kernel':42s} {'python [us]':>12s} {'cython [us]':>12s} {'speedup':>8s} {'rel diff':>10s}")
    for name, (fn_name, fargs) in workloads(rng).items():
        py = time_call(getattr(_fallback, fn_name), fargs, args.repeat)
        row = {"kernel": name, "python_s": py}
        if compiled is not None:
            cy = time_call(getattr(compiled, fn_name), fargs, args.repeat)
            a, b = getattr(compiled, fn_name)(*fargs), getattr(_fallback, fn_name)(*fargs)
            diff = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))
            row.update(cython_s=cy, speedup=py / cy, max_rel_diff=diff)
            print(f"{name:42s} {py * 1e6:12.1f} {cy * 1e6:12.1f} {py / cy:8.1f} {diff:10.1e}")
        else:
            print(f"{name:42s} {py * 1e6:12.1f}")
        rows.append(row)

    suite = {"python_s": suite_time(pure=True)}
    if compiled is not None:
        suite["cython_s"] = suite_time(pure=False)
        print(f"{'suite run (theorem1 + additivity)':42s} {suite['python_s'] * 1e3:10.0f}ms "
              f"{suite['cython_s'] * 1e3:10.0f}ms {suite['python_s'] / suite['cython_s']:8.1f}")
    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump({"kernels": rows, "suite": suite}, fh, indent=1)


if __name__ == "__main__":
    main()
