"""Acceptance criteria, one test each.

Every criterion is a function returning ``(ok, detail)``.  Under pytest the
results are collected and printed as one PASS/FAIL line per criterion at
the end of the run; ``python tests/test_acceptance.py`` prints the same
lines directly.
"""

import os
import random
import sys
import tempfile
import time
from functools import lru_cache
from itertools import product

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from advicebp import kernels  # noqa: E402
from advicebp.advice import REGISTER_BOUND, encode_advice, run_tm  # noqa: E402
from advicebp.advice_sort import (  # noqa: E402
    SortParams,
    advice_merge_sort,
    build_table,
    load_table,
    reference_merge_sort,
    save_table,
)
from advicebp.barrington import compile_circuit, compile_plan  # noqa: E402
from advicebp.bp import eval_perm_bp, perm_yields, width  # noqa: E402
from advicebp.circuit import depth, parse_circuit  # noqa: E402
from advicebp.equiv import (  # noqa: E402
    PlanProgram,
    bits_of,
    equiv_exhaustive,
    gen_corpus,
    random_circuit,
)
from advicebp.parallelize import bp_to_circuit, clog2  # noqa: E402
from advicebp.perm5 import IDENTITY  # noqa: E402

RESULTS = {}


def balanced_and(leaves: int) -> str:
    lines = [f"inputs {leaves}"]
    layer = [f"x{i}" for i in range(1, leaves + 1)]
    g = 0
    while len(layer) > 1:
        nxt = []
        for a, b in zip(layer[::2], layer[1::2]):
            g += 1
            lines.append(f"g{g} = AND {a} {b}")
            nxt.append(f"g{g}")
        layer = nxt
    lines.append(f"output {layer[0]}")
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def corpus():
    return gen_corpus(seed=0, counts=(100, 100))


@lru_cache(maxsize=None)
def compiled():
    return tuple((c, compile_circuit(c)) for c in corpus().circuits)


def criterion_1():
    start = time.perf_counter()
    pairs = compiled()
    over = [i for i, (c, p) in enumerate(pairs) if len(p) > 4 ** depth(c)]
    trees = [len(compile_circuit(parse_circuit(balanced_and(2 ** d)))) for d in (1, 2, 3)]
    elapsed = time.perf_counter() - start
    ok = not over and trees == [4, 16, 64] and elapsed < 10
    return ok, (f"{len(pairs)} circuits, {len(over)} over 4^depth; "
                f"balanced AND lengths {trees}; {elapsed:.2f}s (limit 10s)")


def criterion_2():
    pairs = compiled()
    start = time.perf_counter()
    bad = 0
    inputs = 0
    for c, p in pairs:
        v = equiv_exhaustive(c, p)
        inputs += v.inputs_checked
        bad += not v.equal
    elapsed = time.perf_counter() - start
    max_n = max(c.n for c, _ in pairs)
    ok = bad == 0 and len(pairs) >= 100 and max_n <= 8 and elapsed < 60
    return ok, (f"{len(pairs)} circuits (n <= {max_n}), {inputs} inputs, "
                f"{bad} counterexamples; {elapsed:.2f}s (limit 60s)")


def criterion_3():
    rng = random.Random(3)
    programs = [p for _, p in compiled()]
    programs += [compile_circuit(random_circuit(rng, n, 4)) for n in (9, 10, 11, 12) for _ in range(5)]
    checked = violations = 0
    for p in programs:
        if p.n <= 8:
            masks = range(1 << p.n)
        else:
            masks = [rng.getrandbits(p.n) for _ in range(10_000)]
        for y in perm_yields(p, masks):
            checked += 1
            violations += y != IDENTITY and y != p.target
    ok = violations == 0
    return ok, f"{len(programs)} programs, {checked} yields, {violations} outside {{identity, target}}"


def criterion_4():
    runs = mismatches = left_moves = 0
    nonmonotone = 0
    for _, p in compiled():
        tape = encode_advice(p)
        for m in range(1 << p.n):
            x = bits_of(m, p.n)
            bit, stats = run_tm(tape, x)
            runs += 1
            mismatches += bit != eval_perm_bp(p, x)
            left_moves += stats.advice_head_moves_left
            nonmonotone += not stats.advice_monotone
    rng = random.Random(4)
    observed = {}
    for n in (4, 8, 16, 32):
        p = compile_circuit(parse_circuit(balanced_and(n)))
        tape = encode_advice(p)
        witness = set()
        for _ in range(32):
            x = tuple(rng.randint(0, 1) for _ in range(n))
            bit, stats = run_tm(tape, x)
            mismatches += bit != eval_perm_bp(p, x)
            left_moves += stats.advice_head_moves_left
            witness |= stats.register_witness
        observed[n] = len(witness)
    within = all(size <= REGISTER_BOUND for size in observed.values())
    ok = mismatches == 0 and left_moves == 0 and nonmonotone == 0 and within
    return ok, (f"{runs} corpus runs, {mismatches} disagreements, advice left moves {left_moves}; "
                f"witness sizes {observed} all <= K={REGISTER_BOUND}")


def _bp_depth_limit(length):
    return 4 * clog2(length) + 4


def criterion_5():
    bps = corpus().bps
    bad = over = 0
    for b in bps:
        assert width(b) <= 5 and b.length <= 64 and b.n <= 10
        c = bp_to_circuit(b)
        bad += not equiv_exhaustive(b, c).equal
        over += depth(c) > _bp_depth_limit(b.length)
    ok = len(bps) >= 100 and bad == 0 and over == 0
    return ok, f"{len(bps)} BPs, {bad} inequivalent, {over} over 4*clog2(L)+4"


def criterion_6():
    bad = over = 0
    longest = 0
    for b in corpus().bps:
        c = bp_to_circuit(b)
        plan, root = compile_plan(c)
        prog = PlanProgram(plan, root)
        bad += not equiv_exhaustive(b, prog).equal
        over += len(prog) > 4 ** _bp_depth_limit(b.length)
        longest = max(longest, len(prog))
    ok = bad == 0 and over == 0
    return ok, (f"{len(corpus().bps)} round trips, {bad} inequivalent, {over} over length bound; "
                f"longest program {longest}")


def criterion_7():
    suite_start = time.perf_counter()
    params = SortParams(16, 3, 4)
    t0 = time.perf_counter()
    table = build_table(params)
    build_s = time.perf_counter() - t0
    rng = random.Random(7)
    wrong = over = 0
    ours = ref = 0
    for _ in range(10_000):
        x = [rng.randint(0, 3) for _ in range(16)]
        out, comps = advice_merge_sort(x, table)
        expected, rc = reference_merge_sort(x)
        wrong += out != expected
        over += comps > params.n * params.merge_levels
        ours += comps
        ref += rc
    small = SortParams(8, 2, 2)
    small_table = build_table(small)
    for x in product(range(3), repeat=8):
        out, comps = advice_merge_sort(x, small_table)
        wrong += out != sorted(x)
        over += comps > small.n * small.merge_levels
    suite_s = time.perf_counter() - suite_start
    mean_ours, mean_ref = ours / 10_000, ref / 10_000
    ok = (len(table) == 256 and wrong == 0 and over == 0 and mean_ours < mean_ref
          and build_s < 5 and suite_s < 60)
    return ok, (f"{wrong} wrong, {over} over n*merge_levels; mean comparisons "
                f"{mean_ours:.2f} vs reference {mean_ref:.2f}; build {build_s:.3f}s, suite {suite_s:.2f}s")


def criterion_8():
    from advicebp.bp import Instruction, PermProgram
    from advicebp.perm5 import Perm5
    sigma = Perm5.parse("23451")
    tape = encode_advice(PermProgram(1, (Instruction(1, sigma, IDENTITY),), sigma)).symbols
    tape_ok = tape.encode("ascii") == b"BIm2345112345ArarrrE"
    tables_ok = True
    with tempfile.TemporaryDirectory() as tmp:
        for n, k, b in [(16, 3, 4), (8, 2, 2), (4, 1, 1)]:
            first, second = os.path.join(tmp, "a"), os.path.join(tmp, "b")
            save_table(build_table(SortParams(n, k, b)), first)
            save_table(load_table(first), second)
            with open(first, "rb") as fa, open(second, "rb") as fb:
                tables_ok &= fa.read() == fb.read()
    return tape_ok and tables_ok, f"worked tape {tape!r}; table files byte-identical: {tables_ok}"


CRITERIA = [
    (1, "Barrington length bound", criterion_1),
    (2, "compiler correctness", criterion_2),
    (3, "yield discipline", criterion_3),
    (4, "advice machine simulation", criterion_4),
    (5, "BP parallelization", criterion_5),
    (6, "BP -> circuit -> width-5 round trip", criterion_6),
    (7, "table-accelerated merge sort", criterion_7),
    (8, "bit-exact encodings", criterion_8),
]


def report_line(number, name, ok, detail):
    return f"criterion {number} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"


@pytest.mark.parametrize("number, name, check", CRITERIA, ids=[f"c{n}" for n, _, _ in CRITERIA])
def test_criterion(number, name, check):
    ok, detail = check()
    RESULTS[number] = report_line(number, name, ok, detail)
    print(RESULTS[number])
    assert ok, detail


if __name__ == "__main__":
    print(f"kernel backend: {kernels.BACKEND}")
    failed = 0
    for number, name, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(report_line(number, name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
