"""Command-line entry point: ``advicebp <command> ...``.

Exit status: 0 on success (or equivalence), 1 when a counterexample is
found, 2 on usage or file-format errors.  Results go to stdout, diagnostics
to stderr.
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time

from . import kernels
from .advice import AdviceGrammarError, InputLengthMismatch, encode_advice, load_advice, run_tm, save_advice
from .advice_sort import (
    SortParams,
    TableError,
    advice_merge_sort,
    build_table,
    load_table,
    reference_merge_sort,
    save_table,
)
from .barrington import DEFAULT_TARGET, ResourceLimitError, compile_circuit, compile_plan
from .bp import (
    BPFormatError,
    GeneralBP,
    IllFormedProgram,
    PermProgram,
    format_general_bp,
    format_perm_program,
    load_bp,
    perm_to_general,
    width,
)
from .circuit import CircuitParseError, depth, format_circuit, gate_count, load_circuit
from .equiv import PlanProgram, equiv_exhaustive, equiv_sampled, evaluate
from .parallelize import bp_to_circuit, clog2, depth_bound
from .perm5 import NotFiveCycle, Perm5

EXIT_OK, EXIT_DIFFERENT, EXIT_USAGE = 0, 1, 2

_FORMAT_ERRORS = (
    CircuitParseError,
    BPFormatError,
    AdviceGrammarError,
    InputLengthMismatch,
    TableError,
    NotFiveCycle,
    OSError,
    ValueError,
)


class UsageError(Exception):
    pass


def _bits(text: str) -> tuple[int, ...]:
    text = text.strip()
    if any(ch not in "01" for ch in text):
        raise UsageError(f"--input must be a 0/1 string, got {text!r}")
    return tuple(int(ch) for ch in text)


def _write(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_any(path):
    """Load a circuit, permbp/genbp file or advice tape, by sniffing the content."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    first = next((ln.strip() for ln in text.splitlines()
                  if ln.strip() and not ln.strip().startswith("#")), "")
    if first.startswith("inputs"):
        return load_circuit(path)
    if first.startswith(("permbp", "genbp")):
        return load_bp(path)
    if first.startswith("B"):
        return load_advice(path)
    raise UsageError(f"{path}: unrecognized file format")


def cmd_compile(args) -> int:
    c = load_circuit(args.circuit)
    target = Perm5.parse(args.target) if args.target else DEFAULT_TARGET
    prog = compile_circuit(c, target)
    _write(args.out, format_perm_program(prog))
    print(f"length={len(prog)} depth={depth(c)} bound={4 ** depth(c)}")
    return EXIT_OK


def _load_general(path) -> GeneralBP:
    b = load_bp(path)
    if isinstance(b, PermProgram):
        b = perm_to_general(b)
    return b


def cmd_bp2circuit(args) -> int:
    b = _load_general(args.bp)
    c = bp_to_circuit(b)
    _write(args.out, format_circuit(c))
    print(f"gates={gate_count(c)} depth={depth(c)} bound={depth_bound(width(b), b.length)}")
    return EXIT_OK


def cmd_encode(args) -> int:
    prog = load_bp(args.bp)
    if not isinstance(prog, PermProgram):
        raise UsageError(f"{args.bp}: encode needs a permbp file")
    tape = encode_advice(prog)
    save_advice(tape, args.out)
    print(f"symbols={len(tape)}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    tape = load_advice(args.advice)
    bit, stats = run_tm(tape, _bits(args.input))
    print("accept" if bit else "reject")
    if args.stats:
        for line in stats.as_lines():
            print(line)
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.circuit:
        obj = load_circuit(args.circuit)
    elif args.bp:
        obj = load_bp(args.bp)
    else:
        obj = _load_general(args.genbp)
    print(evaluate(obj, _bits(args.input)))
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = _load_any(args.a), _load_any(args.b)
    if a.n != b.n:
        raise UsageError(f"arity mismatch: {a.n} vs {b.n}")
    if a.n <= args.max_n:
        verdict = equiv_exhaustive(a, b)
        scope = f"2^{a.n} inputs"
    else:
        print(f"seed={args.seed}", file=sys.stderr)
        verdict = equiv_sampled(a, b, args.samples, args.seed)
        scope = f"{verdict.inputs_checked} sampled inputs (seed {args.seed})"
    if verdict.equal:
        print(f"equal over {scope}")
        return EXIT_OK
    print("counterexample " + "".join(map(str, verdict.counterexample)))
    return EXIT_DIFFERENT


def cmd_roundtrip(args) -> int:
    b = _load_general(args.genbp)
    w, length = width(b), b.length
    c = bp_to_circuit(b)
    d = depth(c)
    plan, root = compile_plan(c, DEFAULT_TARGET)
    prog = PlanProgram(plan, root)
    d_bound = depth_bound(w, length)
    print(f"bp: n={b.n} length={length} width={w}")
    print(f"circuit: gates={gate_count(c)} depth={d} depth_bound={d_bound}")
    print(f"program: length={len(prog)} length_bound=4^{d_bound} within_bound={int(len(prog) <= 4 ** d_bound)}")
    ok = len(prog) <= 4 ** d_bound and d <= d_bound
    if b.n > args.max_n:
        print(f"seed={args.seed} samples={args.samples}")
    for name, (f, g) in {"bp=circuit": (b, c), "circuit=program": (c, prog), "bp=program": (b, prog)}.items():
        if b.n <= args.max_n:
            v = equiv_exhaustive(f, g)
        else:
            v = equiv_sampled(f, g, args.samples, args.seed)
        ok = ok and v.equal
        print(f"{name}: " + ("equal" if v.equal else "counterexample " + "".join(map(str, v.counterexample))))
    if args.out:
        _write(args.out, format_perm_program(plan.expand(root)))
    return EXIT_OK if ok else EXIT_DIFFERENT


def cmd_sort_table(args) -> int:
    params = SortParams(args.n, args.k, args.b)
    start = time.perf_counter()
    table = build_table(params)
    elapsed = time.perf_counter() - start
    save_table(table, args.out)
    print(f"n={params.n} k={params.k} b={params.b} entries={len(table)} "
          f"merge_levels={params.merge_levels} build_seconds={elapsed:.3f}")
    return EXIT_OK


def _values(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--input must be comma-separated integers, got {text!r}") from None


def cmd_sort(args) -> int:
    table = load_table(args.table)
    x = _values(args.input)
    out, comparisons = advice_merge_sort(x, table)
    print(",".join(map(str, out)))
    if args.count:
        _, ref = reference_merge_sort(x)
        print(f"comparisons={comparisons}")
        print(f"reference_comparisons={ref}")
    return EXIT_OK


def cmd_bench_sort(args) -> int:
    table = load_table(args.table)
    p = table.params
    rng = random.Random(args.seed)
    adv_counts, ref_counts = [], []
    adv_time = ref_time = 0.0
    for _ in range(args.trials):
        x = [rng.randint(0, p.k) for _ in range(p.n)]
        t0 = time.perf_counter()
        out, ca = advice_merge_sort(x, table)
        t1 = time.perf_counter()
        expected, cr = reference_merge_sort(x)
        t2 = time.perf_counter()
        if out != expected:
            print(f"mismatch on {x}", file=sys.stderr)
            return EXIT_DIFFERENT
        adv_counts.append(ca)
        ref_counts.append(cr)
        adv_time += t1 - t0
        ref_time += t2 - t1
    print(f"seed={args.seed} trials={args.trials} n={p.n} k={p.k} b={p.b} "
          f"merge_levels={p.merge_levels} backend={kernels.BACKEND}")
    print(f"{'algorithm':<10} {'mean':>10} {'min':>6} {'max':>6} {'bound':>8} {'seconds':>9}")
    print(f"{'advice':<10} {statistics.fmean(adv_counts):>10.2f} {min(adv_counts):>6} "
          f"{max(adv_counts):>6} {p.n * p.merge_levels:>8} {adv_time:>9.4f}")
    print(f"{'reference':<10} {statistics.fmean(ref_counts):>10.2f} {min(ref_counts):>6} "
          f"{max(ref_counts):>6} {p.n * clog2(p.n):>8} {ref_time:>9.4f}")
    # key construction reads every value once per lookup: b reads per block
    print(f"key_construction_reads_per_sort={p.n}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="advicebp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="circuit netlist -> width-5 permutation program")
    p.add_argument("--circuit", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--target", help="5-cycle the program outputs on 1 (default 23451)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("bp2circuit", help="leveled branching program -> shallow circuit")
    p.add_argument("--bp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bp2circuit)

    p = sub.add_parser("encode", help="permutation program -> advice tape")
    p.add_argument("--bp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("simulate", help="run the constant-space machine on an advice tape")
    p.add_argument("--advice", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("eval", help="evaluate a circuit or branching program on one input")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--circuit")
    g.add_argument("--bp")
    g.add_argument("--genbp")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("equiv", help="brute-force equivalence of two files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--max-n", type=int, default=20, help="largest n checked exhaustively")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("roundtrip", help="genbp -> circuit -> width-5 program, with equivalence checks")
    p.add_argument("--genbp", required=True)
    p.add_argument("--out", help="also write the expanded width-5 program here")
    p.add_argument("--max-n", type=int, default=20)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("sort-table", help="build a block-sort table file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sort_table)

    p = sub.add_parser("sort", help="sort comma-separated values with a table")
    p.add_argument("--table", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("bench-sort", help="comparison counts: table sort vs. plain merge sort")
    p.add_argument("--table", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench_sort)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already printed the offending flag
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimitError, IllFormedProgram) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _FORMAT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
