"""Compare the compiled kernels against the pure-Python fallback.

Runs the same exact workloads (dense multiplication, reduced echelon
form, algebra closure) in two subprocesses, one with SEMIMAT_PURE=1 and
one without, and prints the timings side by side. Usage:

    python benchmarks/bench_backends.py [--sizes 20,40,60] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

_WORKLOAD = r"""
import json
import random
import time

from semimat import _ffcore
from semimat.fields import GF
from semimat.linalg import Matrix, random_matrix
from semimat.algebra import algebra_closure

sizes = %(sizes)r
repeat = %(repeat)d
rng = random.Random(0)
field = GF(3, 2)
out = {"backend": _ffcore.BACKEND, "matmul": {}, "rref": {}, "closure": {}}

for n in sizes:
    a = random_matrix(field, n, n, rng)
    b = random_matrix(field, n, n, rng)
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        a @ b
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    out["matmul"][str(n)] = best

    best = None
    for _ in range(repeat):
        c = a.copy()
        t0 = time.perf_counter()
        c.rref()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    out["rref"][str(n)] = best

gens = [random_matrix(GF(5), 5, 5, rng) for _ in range(2)]
best = None
for _ in range(repeat):
    t0 = time.perf_counter()
    algebra_closure(gens)
    dt = time.perf_counter() - t0
    best = dt if best is None else min(best, dt)
out["closure"]["5x5 pair over GF(5)"] = best

print(json.dumps(out))
"""


def run_backend(pure, sizes, repeat):
    env = dict(os.environ)
    if pure:
        env["SEMIMAT_PURE"] = "1"
    else:
        env.pop("SEMIMAT_PURE", None)
    code = _WORKLOAD % {"sizes": sizes, "repeat": repeat}
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit("benchmark subprocess failed")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="20,40,60",
                        help="comma separated matrix sizes")
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions per measurement (best is kept)")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s]

    fast = run_backend(False, sizes, args.repeat)
    pure = run_backend(True, sizes, args.repeat)
    if fast["backend"] == pure["backend"]:
        print("note: compiled backend unavailable, comparing %s with itself"
              % fast["backend"])

    print("%-28s %12s %12s %9s" % ("workload", fast["backend"], "python",
                                   "speedup"))
    for section in ("matmul", "rref", "closure"):
        for key in fast[section]:
            f = fast[section][key]
            p = pure[section][key]
            label = "%s %s" % (section, key)
            ratio = p / f if f > 0 else float("inf")
            print("%-28s %10.6fs %10.6fs %8.1fx" % (label, f, p, ratio))


if __name__ == "__main__":
    main()
