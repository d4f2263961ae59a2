import random

import pytest

from advicebp.advice import encode_advice
from advicebp.barrington import compile_circuit, compile_plan
from advicebp.bp import perm_to_general
from advicebp.circuit import AND, CONST, INPUT, NOT, OR, depth, eval_circuit, parse_circuit
from advicebp.equiv import (
    MAX_EXHAUSTIVE_N,
    PlanProgram,
    bits_of,
    equiv_exhaustive,
    equiv_sampled,
    evaluate,
    evaluate_many,
    gen_corpus,
    random_bp,
    random_circuit,
    structural_circuits,
)

from conftest import all_inputs

X1 = parse_circuit("inputs 3\noutput x1\n")
NOT_X1 = parse_circuit("inputs 3\ng = NOT x1\noutput g\n")


def test_bits_are_little_endian():
    assert bits_of(0b110, 3) == (0, 1, 1)
    assert bits_of(5, 0) == ()


def test_first_counterexample_in_mask_order():
    v = equiv_exhaustive(X1, NOT_X1)
    assert not v.equal and v.counterexample == (0, 0, 0)
    and_ = parse_circuit("inputs 2\ng = AND x1 x2\noutput g\n")
    or_ = parse_circuit("inputs 2\ng = OR x1 x2\noutput g\n")
    assert equiv_exhaustive(and_, or_).counterexample == (1, 0)


def test_equal_reports_full_count():
    v = equiv_exhaustive(X1, compile_circuit(X1))
    assert v.equal and v.inputs_checked == 8 and v.counterexample is None
    assert bool(v)


def test_arity_checks():
    two = parse_circuit("inputs 2\noutput x1\n")
    with pytest.raises(ValueError):
        equiv_exhaustive(X1, two)
    with pytest.raises(ValueError):
        equiv_exhaustive(X1, X1, n=4)
    wide = parse_circuit(f"inputs {MAX_EXHAUSTIVE_N + 1}\noutput x1\n")
    with pytest.raises(ValueError):
        equiv_exhaustive(wide, wide)


def test_sampled_mode_is_deterministic():
    c = parse_circuit("inputs 24\ng = AND x1 x24\noutput g\n")
    d = parse_circuit("inputs 24\ng = OR x1 x24\noutput g\n")
    a, b = equiv_sampled(c, d, 200, seed=3), equiv_sampled(c, d, 200, seed=3)
    assert a == b and not a.equal
    assert equiv_sampled(c, c, 200).equal


def test_every_model_evaluates_consistently():
    rng = random.Random(0)
    c = random_circuit(rng, 5, 3)
    p = compile_circuit(c)
    plan, root = compile_plan(c)
    models = [c, p, PlanProgram(plan, root), perm_to_general(p), encode_advice(p)]
    masks = list(range(32))
    want = [eval_circuit(c, bits_of(m, 5)) for m in masks]
    for obj in models:
        assert evaluate_many(obj, masks) == want
        assert [evaluate(obj, bits_of(m, 5)) for m in masks] == want


def test_unknown_objects_rejected():
    with pytest.raises(TypeError):
        evaluate_many(object(), [0])
    with pytest.raises(TypeError):
        evaluate("x", ())


def test_chunking_does_not_change_verdict():
    c = parse_circuit("inputs 6\ng = AND x5 x6\nh = NOT g\noutput h\n")
    d = parse_circuit("inputs 6\nh = NOT x6\noutput h\n")
    for chunk in (1, 7, 64, 1 << 14):
        assert equiv_exhaustive(c, d, chunk=chunk).counterexample == (0, 0, 0, 0, 0, 1)


def test_structural_corpus_covers_every_kind():
    circuits = structural_circuits(3)
    assert len(circuits) == len(set(circuits))
    kinds = {node.kind for c in circuits for node in c.nodes}
    assert kinds == {INPUT, CONST, NOT, AND, OR}
    assert {depth(c) for c in circuits} == {0, 1, 2}
    # 10 literals, 110 depth-1 gates, 14410 depth-2 gates
    assert len(circuits) == 14530


def test_corpus_is_deterministic_and_in_range():
    a, b = gen_corpus(seed=7, counts=(20, 20)), gen_corpus(seed=7, counts=(20, 20))
    assert a.random_circuits == b.random_circuits and a.bps == b.bps
    assert all(c.n <= 8 and depth(c) <= 6 for c in a.random_circuits)
    for bp in a.bps:
        assert bp.n <= 10 and bp.length <= 64
        assert max(len(level) for level in bp.levels) <= 5


def test_random_bp_has_requested_width():
    from advicebp.bp import width
    rng = random.Random(1)
    for w in range(1, 6):
        assert width(random_bp(rng, 4, w, 9)) == w


def test_structural_truth_tables_match_formulas():
    for c in structural_circuits(3)[::211]:
        assert evaluate_many(c, range(8)) == [eval_circuit(c, x) for x in all_inputs(3)]
