import random
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from advicebp.perm5 import (
    ALL_PERMS,
    FIVE_CYCLES,
    IDENTITY,
    NotFiveCycle,
    Perm5,
    commutator,
    compose,
    conjugate,
    cycle_type,
    find_commutator_pair,
    find_conjugator,
    inverse,
    is_five_cycle,
)

perms = st.sampled_from(ALL_PERMS)
SHIFT = Perm5((2, 3, 4, 5, 1))


# Independent oracles: permutations as dicts, composed pointwise.
def as_map(p):
    return {s: p[s - 1] for s in range(1, 6)}


def compose_oracle(p, q):
    pm, qm = as_map(p), as_map(q)
    return tuple(qm[pm[s]] for s in range(1, 6))


def inverse_oracle(p):
    pm = as_map(p)
    back = {v: s for s, v in pm.items()}
    return tuple(back[s] for s in range(1, 6))


def cycle_walk_is_five_cycle(p):
    s, steps = p(1), 1
    while s != 1:
        s, steps = p(s), steps + 1
    return steps == 5


def test_textual_form():
    assert str(SHIFT) == "23451"
    assert Perm5.parse("23451") == SHIFT
    with pytest.raises(ValueError):
        Perm5.parse("23450")
    with pytest.raises(ValueError):
        Perm5((1, 1, 2, 3, 4))


def test_compose_examples():
    p = Perm5((3, 1, 2, 5, 4))
    assert compose(IDENTITY, p) == p
    assert compose(p, inverse(p)) == IDENTITY
    assert compose(SHIFT, SHIFT) == (3, 4, 5, 1, 2)
    assert compose_oracle(SHIFT, SHIFT) == (3, 4, 5, 1, 2)


def test_compose_is_apply_first_argument_first():
    p, q = Perm5((2, 1, 3, 4, 5)), Perm5((1, 3, 2, 4, 5))
    for s in range(1, 6):
        assert compose(p, q)(s) == q(p(s))


def test_compose_matches_pointwise_oracle_exhaustively():
    for p in ALL_PERMS:
        for q in ALL_PERMS:
            assert compose(p, q) == compose_oracle(p, q)


def test_inverse():
    assert inverse(IDENTITY) == IDENTITY
    assert inverse(SHIFT) == (5, 1, 2, 3, 4)
    for p in ALL_PERMS:
        assert inverse(p) == inverse_oracle(p)
    rng = random.Random(0)
    for _ in range(100):
        p = rng.choice(ALL_PERMS)
        assert compose(inverse(p), p) == IDENTITY


@given(perms, perms, perms)
def test_associativity(p, q, r):
    assert compose(compose(p, q), r) == compose(p, compose(q, r))


def test_associativity_sample():
    rng = random.Random(7)
    for _ in range(1000):
        p, q, r = (rng.choice(ALL_PERMS) for _ in range(3))
        assert compose(compose(p, q), r) == compose(p, compose(q, r))


@given(perms)
def test_identity_is_neutral(p):
    assert compose(p, IDENTITY) == compose(IDENTITY, p) == p


def test_conjugate_examples():
    p = Perm5((3, 1, 2, 5, 4))
    assert conjugate(p, IDENTITY) == p
    assert conjugate(IDENTITY, SHIFT) == IDENTITY
    g = Perm5((2, 1, 3, 4, 5))
    assert conjugate(p, g) == compose_oracle(compose_oracle(inverse_oracle(g), p), g)


def test_conjugation_preserves_cycle_type_exhaustively():
    for p in ALL_PERMS:
        ct = cycle_type(p)
        for g in ALL_PERMS:
            assert cycle_type(conjugate(p, g)) == ct


def test_commutator():
    p = Perm5((3, 1, 2, 5, 4))
    assert commutator(p, p) == IDENTITY
    assert commutator(IDENTITY, p) == IDENTITY
    a, b = Perm5((2, 3, 1, 4, 5)), Perm5((1, 2, 4, 5, 3))
    expected = compose_oracle(compose_oracle(compose_oracle(a, b), inverse_oracle(a)), inverse_oracle(b))
    assert commutator(a, b) == expected


def test_five_cycles():
    assert not is_five_cycle(IDENTITY)
    assert is_five_cycle(SHIFT)
    assert sum(cycle_walk_is_five_cycle(Perm5(p)) for p in permutations(range(1, 6))) == 24
    assert sum(is_five_cycle(p) for p in ALL_PERMS) == 24
    assert len(FIVE_CYCLES) == 24
    for p in ALL_PERMS:
        assert is_five_cycle(p) == cycle_walk_is_five_cycle(p)


def test_find_conjugator_all_pairs():
    for a in FIVE_CYCLES:
        for b in FIVE_CYCLES:
            g = find_conjugator(a, b)
            assert conjugate(a, g) == b
            # lexicographically smallest among every valid conjugator
            assert g == min(h for h in ALL_PERMS if conjugate(a, h) == b)


def test_find_conjugator_self_is_smallest_commuting():
    a = FIVE_CYCLES[3]
    g = find_conjugator(a, a)
    assert g == min(h for h in ALL_PERMS if compose(a, h) == compose(h, a))


def test_find_conjugator_rejects_non_cycles():
    with pytest.raises(NotFiveCycle):
        find_conjugator(IDENTITY, SHIFT)
    with pytest.raises(NotFiveCycle):
        find_conjugator(SHIFT, Perm5((2, 1, 3, 4, 5)))


def test_commutator_pair_by_exhaustive_search():
    s1, s2 = find_commutator_pair()
    assert is_five_cycle(s1) and is_five_cycle(s2)
    assert is_five_cycle(commutator(s1, s2))
    brute = [(a, b) for a in ALL_PERMS for b in ALL_PERMS
             if cycle_walk_is_five_cycle(a) and cycle_walk_is_five_cycle(b)
             and cycle_walk_is_five_cycle(Perm5(compose_oracle(
                 compose_oracle(compose_oracle(a, b), inverse_oracle(a)), inverse_oracle(b))))]
    assert (s1, s2) == min(brute)
    assert find_commutator_pair() == (s1, s2)


def test_conjugate_table_pointwise():
    from advicebp.perm5 import CONJUGATE_TABLE
    for g in ALL_PERMS[::7]:
        ginv = sorted(range(1, 6), key=lambda s: g(s))
        for p in ALL_PERMS[::5]:
            # g^-1 p g, left to right: apply g^-1, then p, then g
            want = tuple(g(p(ginv[s - 1])) for s in range(1, 6))
            assert ALL_PERMS[CONJUGATE_TABLE[g.code * 120 + p.code]] == want
