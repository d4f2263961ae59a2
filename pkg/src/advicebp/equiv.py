"""Brute-force equivalence checking and test-corpus generation.

Inputs are enumerated in integer order of their mask, with ``x1`` as the
least significant bit, so a reported counterexample is always the first
differing input in that order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .advice import AdviceTape, run_tm
from .barrington import ProgramPlan
from .bp import (
    BPNode,
    GeneralBP,
    IllFormedProgram,
    PermProgram,
    bp_truth_table,
    eval_general_bp,
    eval_perm_bp,
    perm_yields,
)
from .circuit import AND, NOT, OR, Circuit, CircuitBuilder, Node, depth, eval_circuit, truth_table
from .perm5 import IDENTITY

__all__ = [
    "MAX_EXHAUSTIVE_N",
    "Verdict",
    "PlanProgram",
    "arity",
    "bits_of",
    "evaluate",
    "evaluate_many",
    "equiv_exhaustive",
    "equiv_sampled",
    "Corpus",
    "gen_corpus",
    "structural_circuits",
    "random_circuit",
    "random_bp",
]

MAX_EXHAUSTIVE_N = 20


@dataclass(frozen=True)
class PlanProgram:
    """A compiled program kept in plan form (see :class:`ProgramPlan`)."""

    plan: ProgramPlan
    root: int

    @property
    def n(self) -> int:
        return self.plan.n

    @property
    def target(self):
        return self.plan.targets[self.root]

    def __len__(self) -> int:
        return self.plan.lengths[self.root]


@dataclass(frozen=True)
class Verdict:
    equal: bool
    counterexample: tuple[int, ...] | None = None
    inputs_checked: int = 0

    def __bool__(self) -> bool:
        return self.equal


def bits_of(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def arity(obj) -> int:
    return obj.n


def _yields_to_bits(yields, target, masks):
    out = []
    for mask, y in zip(masks, yields):
        if y == target:
            out.append(1)
        elif y == IDENTITY:
            out.append(0)
        else:
            raise IllFormedProgram(f"input mask {mask}: yield {y} is neither identity nor {target}")
    return out


def evaluate_many(obj, masks) -> list[int]:
    """Batch evaluation on input masks, through the fast kernels where possible."""
    masks = list(masks)
    if isinstance(obj, Circuit):
        return truth_table(obj, masks)
    if isinstance(obj, PermProgram):
        return _yields_to_bits(perm_yields(obj, masks), obj.target, masks)
    if isinstance(obj, PlanProgram):
        return _yields_to_bits(obj.plan.yields(obj.root, masks), obj.target, masks)
    if isinstance(obj, GeneralBP):
        return bp_truth_table(obj, masks)
    if isinstance(obj, AdviceTape):
        return [run_tm(obj, bits_of(m, obj.n))[0] for m in masks]
    raise TypeError(f"cannot evaluate {type(obj).__name__}")


def evaluate(obj, x) -> int:
    """Single-input evaluation through each model's reference evaluator."""
    if isinstance(obj, Circuit):
        return eval_circuit(obj, x)
    if isinstance(obj, PermProgram):
        return eval_perm_bp(obj, x)
    if isinstance(obj, GeneralBP):
        return eval_general_bp(obj, x)
    if isinstance(obj, AdviceTape):
        return run_tm(obj, x)[0]
    if isinstance(obj, PlanProgram):
        mask = sum(bit << i for i, bit in enumerate(x))
        return evaluate_many(obj, [mask])[0]
    raise TypeError(f"cannot evaluate {type(obj).__name__}")


def _compare(f, g, n, masks) -> Verdict:
    masks = list(masks)
    fa = evaluate_many(f, masks)
    ga = evaluate_many(g, masks)
    for mask, a, b in zip(masks, fa, ga):
        if a != b:
            x = bits_of(mask, n)
            # re-check with the single-input evaluators before reporting
            if evaluate(f, x) == evaluate(g, x):
                raise AssertionError(f"batch and reference evaluators disagree on {x}")
            return Verdict(False, x, len(masks))
    return Verdict(True, None, len(masks))


def _check_arity(f, g, n):
    if arity(f) != arity(g):
        raise ValueError(f"arity mismatch: {arity(f)} vs {arity(g)}")
    if n is None:
        n = arity(f)
    if n != arity(f):
        raise ValueError(f"arity mismatch: objects take {arity(f)} inputs, asked for {n}")
    return n


def equiv_exhaustive(f, g, n: int | None = None, chunk: int = 1 << 14) -> Verdict:
    n = _check_arity(f, g, n)
    if n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"n={n} exceeds the exhaustive limit {MAX_EXHAUSTIVE_N}")
    total = 1 << n
    for lo in range(0, total, chunk):
        v = _compare(f, g, n, range(lo, min(lo + chunk, total)))
        if not v.equal:
            return v
    return Verdict(True, None, total)


def equiv_sampled(f, g, samples: int, seed: int = 0) -> Verdict:
    n = _check_arity(f, g, None)
    rng = random.Random(seed)
    masks = sorted({rng.getrandbits(n) if n else 0 for _ in range(samples)})
    return _compare(f, g, n, masks)


# -- corpus -------------------------------------------------------------------

def structural_circuits(n: int = 3) -> list[Circuit]:
    """Every formula of AND/OR depth <= 2 over x1..xn and the constants.

    Leaves are variables and constants, optionally negated; depth-1 gates
    combine an unordered pair of those; depth-2 gates combine an unordered
    pair of depth <= 1 formulas with at least one gate among them.
    """
    leaves = [("x", i) for i in range(1, n + 1)] + [("c", 0), ("c", 1)]
    lits = leaves + [("not", leaf) for leaf in leaves]
    gates1 = [(op, a, b) for a, b in combinations_with_replacement(lits, 2) for op in (AND, OR)]
    level1 = lits + gates1
    gate_set = set(gates1)
    gates2 = [
        (op, a, b)
        for a, b in combinations_with_replacement(level1, 2)
        if a in gate_set or b in gate_set
        for op in (AND, OR)
    ]
    return [_build_formula(n, f) for f in lits + gates1 + gates2]


def _build_formula(n, formula) -> Circuit:
    builder = _PlainBuilder(n)
    return builder.build(builder.emit(formula))


class _PlainBuilder(CircuitBuilder):
    """Hash-consing without constant folding, so formulas keep their shape."""

    def emit(self, f):
        tag = f[0]
        if tag == "x":
            return self.var(f[1])
        if tag == "c":
            return self.const(f[1])
        if tag == "not":
            return self._add_gate(NOT, (self.emit(f[1]),))
        return self._add_gate(tag, (self.emit(f[1]), self.emit(f[2])))

    def _add_gate(self, kind, args):
        return self._add(Node(kind, args))


def random_circuit(rng: random.Random, n: int, max_depth: int) -> Circuit:
    """Random DAG circuit with AND/OR depth at most ``max_depth``; nodes get reused."""
    builder = _PlainBuilder(n)
    depths: dict[int, int] = {}

    def make(d):
        existing = [i for i, dd in depths.items() if dd <= d]
        if existing and rng.random() < 0.15:
            return rng.choice(existing)
        if d == 0 or rng.random() < 0.15:
            if rng.random() < 0.06:
                idx = builder.const(rng.randrange(2))
            else:
                idx = builder.var(rng.randrange(1, n + 1))
            depths.setdefault(idx, 0)
        else:
            op = AND if rng.random() < 0.5 else OR
            a, b = make(d - 1), make(d - 1)
            idx = builder._add_gate(op, (a, b))
            depths[idx] = 1 + max(depths[a], depths[b])
        if rng.random() < 0.25:
            neg = builder._add_gate(NOT, (idx,))
            depths[neg] = depths[idx]
            idx = neg
        return idx

    out = make(max_depth)
    c = builder.build(out)
    assert depth(c) <= max_depth
    return c


def random_bp(rng: random.Random, n: int, w: int, length: int) -> GeneralBP:
    """Random leveled program with max level size exactly ``w`` and ``length`` inner levels."""
    sizes = [rng.randint(1, w) for _ in range(length + 1)]
    sizes[rng.randrange(length + 1)] = w
    levels = []
    for t in range(length):
        nxt = sizes[t + 1]
        levels.append(tuple(
            BPNode(rng.randint(1, n), rng.randrange(nxt), rng.randrange(nxt))
            for _ in range(sizes[t])
        ))
    sinks = tuple(rng.randrange(2) for _ in range(sizes[-1]))
    return GeneralBP(n, tuple(levels), sinks, rng.randrange(sizes[0]))


@dataclass
class Corpus:
    seed: int
    structural: list[Circuit] = field(default_factory=list)
    random_circuits: list[Circuit] = field(default_factory=list)
    bps: list[GeneralBP] = field(default_factory=list)

    @property
    def circuits(self) -> list[Circuit]:
        return self.structural + self.random_circuits


def gen_corpus(seed: int = 0, counts=(100, 100), structural: bool = True) -> Corpus:
    """Deterministic corpus: structural circuits plus ``counts = (circuits, bps)`` random ones."""
    n_circuits, n_bps = counts
    rng = random.Random(seed)
    corpus = Corpus(seed)
    if structural:
        corpus.structural = structural_circuits(3)
    for _ in range(n_circuits):
        corpus.random_circuits.append(random_circuit(rng, rng.randint(1, 8), rng.randint(0, 6)))
    for _ in range(n_bps):
        corpus.bps.append(random_bp(rng, rng.randint(1, 10), rng.randint(1, 5), rng.randint(1, 64)))
    return corpus
