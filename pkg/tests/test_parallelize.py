import itertools
import random

import pytest

from advicebp.bp import BPNode, GeneralBP, eval_general_bp, width
from advicebp.circuit import CircuitBuilder, depth, eval_circuit
from advicebp.equiv import equiv_exhaustive, random_bp
from advicebp.parallelize import (
    CONST0,
    CONST1,
    Entry,
    LiteralMatrix,
    bool_matrix_product,
    bp_to_circuit,
    clog2,
    depth_bound,
    level_matrix,
)

from conftest import all_inputs


def entry_value(e, x, builder):
    if e.kind == "const":
        return e.ref
    if e.kind == "pos":
        return x[e.ref - 1]
    if e.kind == "neg":
        return 1 - x[e.ref - 1]
    c = builder.build(e.ref, prune=False)
    return eval_circuit(c, x)


def reach_matrix(b, lo, hi, x):
    """Oracle: which nodes of level hi are reached from each node of level lo."""
    sizes = [len(level) for level in b.levels] + [len(b.sinks)]
    rows = []
    for u in range(sizes[lo]):
        pos = u
        for t in range(lo, hi):
            nd = b.levels[t][pos]
            pos = nd.e1 if x[nd.var - 1] else nd.e0
        rows.append([int(v == pos) for v in range(sizes[hi])])
    return rows


def test_clog2():
    assert [clog2(v) for v in (0, 1, 2, 3, 4, 5, 8, 9, 64)] == [0, 0, 1, 2, 2, 3, 3, 4, 6]


def test_level_matrix_entries():
    b = GeneralBP(3, ((BPNode(3, 0, 1), BPNode(2, 1, 1)),), (0, 1), 0)
    m = level_matrix(b, 0)
    assert m[0, 0] == Entry("neg", 3) and m[0, 1] == Entry("pos", 3)
    assert m[1, 1] == CONST1 and m[1, 0] == CONST0
    with pytest.raises(IndexError):
        level_matrix(b, 1)


def test_product_with_identity():
    builder = CircuitBuilder(2)
    ident = LiteralMatrix(((CONST1, CONST0), (CONST0, CONST1)))
    a = LiteralMatrix(((Entry("pos", 1), Entry("neg", 2)), (CONST1, Entry("pos", 2))))
    out = bool_matrix_product(ident, a, builder)
    for x in all_inputs(2):
        for u, v in itertools.product(range(2), repeat=2):
            assert entry_value(out[u, v], x, builder) == entry_value(a[u, v], x, builder)


def test_product_2x2_truth_table():
    builder = CircuitBuilder(3)
    a = LiteralMatrix(((Entry("pos", 1), Entry("neg", 1)), (Entry("pos", 2), CONST1)))
    b = LiteralMatrix(((Entry("neg", 3), CONST0), (Entry("pos", 3), Entry("pos", 2))))
    out = bool_matrix_product(a, b, builder)
    for x in all_inputs(3):
        av = [[entry_value(a[u, m], x, builder) for m in range(2)] for u in range(2)]
        bv = [[entry_value(b[m, v], x, builder) for v in range(2)] for m in range(2)]
        for u, v in itertools.product(range(2), repeat=2):
            expected = int(any(av[u][m] and bv[m][v] for m in range(2)))
            assert entry_value(out[u, v], x, builder) == expected


def test_product_dimension_mismatch():
    a = LiteralMatrix(((CONST1, CONST0),))
    with pytest.raises(ValueError):
        bool_matrix_product(a, a, CircuitBuilder(1))


@pytest.mark.parametrize("w", [1, 2, 3, 4, 5, 8])
def test_product_added_depth(w):
    rng = random.Random(w)
    builder = CircuitBuilder(6)
    lit = lambda: Entry(rng.choice(["pos", "neg"]), rng.randint(1, 6))
    a = LiteralMatrix(tuple(tuple(lit() for _ in range(w)) for _ in range(w)))
    b = LiteralMatrix(tuple(tuple(lit() for _ in range(w)) for _ in range(w)))
    out = bool_matrix_product(a, b, builder)
    for row in out.rows:
        for e in row:
            if e.kind == "node":
                assert depth(builder.build(e.ref, prune=False)) <= clog2(w) + 1


def test_matrix_chain_is_reachability():
    rng = random.Random(21)
    from advicebp.parallelize import _range_product

    for _ in range(20):
        n = rng.randint(1, 6)
        b = random_bp(rng, n, rng.randint(1, 5), rng.randint(1, 12))
        builder = CircuitBuilder(n)
        prod = _range_product(b, 0, b.length, builder)
        for x in all_inputs(n):
            got = [[entry_value(e, x, builder) for e in row] for row in prod.rows]
            assert got == reach_matrix(b, 0, b.length, x)


def test_single_level_bp():
    b = GeneralBP(1, ((BPNode(1, 0, 1),),), (0, 1), 0)
    c = bp_to_circuit(b)
    assert depth(c) <= clog2(width(b)) + 1
    assert [eval_circuit(c, (v,)) for v in (0, 1)] == [0, 1]


def test_zero_length_bp():
    for label in (0, 1):
        b = GeneralBP(2, (), (label, 1 - label), 0)
        c = bp_to_circuit(b)
        assert all(eval_circuit(c, x) == label for x in all_inputs(2))


def test_random_bps_equivalent_and_shallow(corpus):
    for b in corpus.bps:
        c = bp_to_circuit(b)
        assert equiv_exhaustive(b, c).equal
        assert depth(c) <= depth_bound(width(b), b.length)
        if width(b) == 5:
            assert depth(c) <= 4 * clog2(b.length) + 4


def test_depth_bound_formula_at_width_5():
    for length in range(1, 200):
        assert depth_bound(5, length) == 4 * clog2(length) + 4
