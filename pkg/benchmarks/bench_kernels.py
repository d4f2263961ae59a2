"""Time each kernel under the compiled and the pure-Python backend.

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads are fixed (seeded), and every backend's results are checked
against the pure-Python ones before timings are printed.
"""

import argparse
import random
import sys
import time

from advicebp import kernels
from advicebp.advice import encode_advice
from advicebp.barrington import compile_circuit, compile_plan
from advicebp.equiv import random_bp, random_circuit
from advicebp.parallelize import bp_to_circuit
from advicebp.perm5 import COMPOSE_TABLE, INVERSE_TABLE


def workloads():
    rng = random.Random(0)
    c = random_circuit(rng, 8, 6)
    kinds, a0, a1 = c.kernel_arrays()
    masks8 = list(range(256))

    p = compile_circuit(random_circuit(rng, 8, 5))
    var_idx = [i.var - 1 for i in p.instructions]
    codes1 = [i.perm1.code for i in p.instructions]
    codes0 = [i.perm0.code for i in p.instructions]

    while True:  # skip programs that fold to a constant
        b = random_bp(rng, 10, 5, 64)
        plan, root = compile_plan(bp_to_circuit(b))
        if root > 500:
            break
    end = root + 1
    pk = plan.kinds[:end]
    pa = [[a[j] for a in plan.args[:end]] for j in range(3)]
    masks10 = list(range(1024))

    values = []
    for _ in range(4096 // 16):
        values.extend(sorted(rng.randrange(256) for _ in range(16)))

    tape = encode_advice(p).symbols.encode()
    inputs = [("<" + "".join(rng.choice("01") for _ in range(8)) + ">").encode() for _ in range(4)]

    return {
        "circuit_eval": lambda m: m.circuit_eval(kinds, a0, a1, c.output, masks8),
        f"perm_yields (L={len(p)})": lambda m: m.perm_yields(var_idx, codes1, codes0, masks8, COMPOSE_TABLE),
        f"plan_yields ({end} steps)": lambda m: m.plan_yields(pk, *pa, root, masks10, COMPOSE_TABLE, INVERSE_TABLE),
        "bp_eval": lambda m: m.bp_eval(*b.kernel_arrays(), list(b.sinks), b.start, masks10),
        "merge_pass": lambda m: m.merge_pass(values, 16),
        f"tm_run ({len(tape)} symbols)": lambda m: [m.tm_run(tape, x) for x in inputs],
    }


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    mods = kernels.backend_modules()
    if "cython" not in mods:
        print("compiled backend not built; only the pure-Python timings are shown", file=sys.stderr)
    names = sorted(mods, reverse=True)
    print(f"{'kernel':<32}" + "".join(f"{n + ' s':>12}" for n in names) + f"{'speedup':>10}")
    for label, fn in workloads().items():
        reference = fn(mods["python"])
        times = {}
        for name in names:
            if fn(mods[name]) != reference:
                raise SystemExit(f"{label}: backend {name} disagrees with the pure-Python result")
            times[name] = best_of(lambda: fn(mods[name]), args.repeat)
        speed = f"{times['python'] / times['cython']:>9.1f}x" if "cython" in times else ""
        print(f"{label:<32}" + "".join(f"{times[n]:>12.4f}" for n in names) + speed)


if __name__ == "__main__":
    main()
