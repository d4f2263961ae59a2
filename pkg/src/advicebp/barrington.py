"""Compile fan-in-2 circuits into width-5 permutation programs.

A program *sigma-computes* ``f`` when its yield is ``sigma`` on inputs with
``f(x) = 1`` and the identity otherwise.  Literals are single instructions;
negation and retargeting keep the length; AND concatenates four retargeted
copies of its operands so that the yield is the commutator of two 5-cycles
exactly when both operands are 1.  A circuit of AND/OR depth ``d`` therefore
compiles to at most ``4**d`` instructions.

Shared subcircuits are expanded once per use.  :class:`ProgramPlan` keeps
the same construction as a straight-line program over sub-programs, so the
yield of very long outputs can be evaluated without writing them out.
"""

from __future__ import annotations

import warnings

from . import kernels
from .bp import Instruction, PermProgram
from .circuit import AND, CONST, INPUT, NOT, OR, Circuit, depth
from .perm5 import (
    ALL_PERMS,
    COMPOSE_TABLE,
    CONJUGATE_TABLE,
    IDENTITY,
    INVERSE_TABLE,
    Perm5,
    NotFiveCycle,
    commutator,
    compose,
    conjugate,
    find_commutator_pair,
    find_conjugator,
    inverse,
    is_five_cycle,
)

__all__ = [
    "DEFAULT_TARGET",
    "WARN_LENGTH",
    "MAX_LENGTH",
    "ResourceLimitError",
    "compile_literal",
    "compile_const",
    "retarget",
    "invert_target",
    "compile_not",
    "compile_and",
    "compile_or",
    "compile_circuit",
    "compile_circuit_direct",
    "compiled_length",
    "ProgramPlan",
    "compile_plan",
]

DEFAULT_TARGET = Perm5.parse("23451")
WARN_LENGTH = 10**6
MAX_LENGTH = 10**8


class ResourceLimitError(RuntimeError):
    pass


def _check_cycle(p: Perm5, what: str) -> None:
    if not is_five_cycle(p):
        raise NotFiveCycle(f"{what} must be a 5-cycle, got {p}")


def compile_literal(i: int, alpha: Perm5, n: int) -> PermProgram:
    _check_cycle(alpha, "alpha")
    if not 1 <= i <= n:
        raise ValueError(f"variable index {i} out of range 1..{n}")
    return PermProgram(n, (Instruction(i, alpha, IDENTITY),), alpha)


def compile_const(bit: int, alpha: Perm5, n: int) -> PermProgram:
    _check_cycle(alpha, "alpha")
    if bit not in (0, 1):
        raise ValueError(f"constant must be 0 or 1, got {bit!r}")
    if bit == 0:
        return PermProgram(n, (), alpha)
    if n < 1:
        raise ValueError("constant 1 needs at least one input variable to attach to")
    return PermProgram(n, (Instruction(1, alpha, alpha),), alpha)


def retarget(p: PermProgram, beta: Perm5) -> PermProgram:
    """Conjugate every instruction so the program beta-computes the same function."""
    _check_cycle(beta, "beta")
    g = find_conjugator(p.target, beta)
    if g == IDENTITY:
        return PermProgram._derived(p.n, p.instructions, beta)
    # Keyed by identity: compiled programs reuse instruction objects heavily,
    # and p keeps every key alive for the duration of the loop.
    memo: dict[int, Instruction] = {}
    instrs = []
    for ins in p.instructions:
        out = memo.get(id(ins))
        if out is None:
            out = memo[id(ins)] = Instruction(ins.var, conjugate(ins.perm1, g), conjugate(ins.perm0, g))
        instrs.append(out)
    return PermProgram._derived(p.n, tuple(instrs), beta)


def invert_target(p: PermProgram) -> PermProgram:
    """Reverse and invert: the yield becomes its inverse, the target too."""
    memo: dict[int, Instruction] = {}
    instrs = []
    for ins in reversed(p.instructions):
        out = memo.get(id(ins))
        if out is None:
            out = memo[id(ins)] = Instruction(ins.var, inverse(ins.perm1), inverse(ins.perm0))
        instrs.append(out)
    return PermProgram._derived(p.n, tuple(instrs), inverse(p.target))


def compile_not(p: PermProgram) -> PermProgram:
    """Negate without changing the length (an empty program becomes constant 1)."""
    if not p.instructions:
        return compile_const(1, p.target, p.n)
    t_inv = inverse(p.target)
    last = p.instructions[-1]
    fixed = Instruction(last.var, compose(last.perm1, t_inv), compose(last.perm0, t_inv))
    negated = PermProgram(p.n, p.instructions[:-1] + (fixed,), t_inv)
    return retarget(negated, p.target)


def compile_and(p: PermProgram, q: PermProgram, target: Perm5 | None = None) -> PermProgram:
    if p.n != q.n:
        raise ValueError(f"input-length mismatch: {p.n} vs {q.n}")
    s1, s2 = find_commutator_pair()
    a = retarget(p, s1)
    b = retarget(q, s2)
    instrs = a.instructions + b.instructions + invert_target(a).instructions + invert_target(b).instructions
    joined = PermProgram(p.n, instrs, commutator(s1, s2))
    return retarget(joined, target or p.target)


def compile_or(p: PermProgram, q: PermProgram, target: Perm5 | None = None) -> PermProgram:
    return compile_not(compile_and(compile_not(p), compile_not(q), target or p.target))


def compiled_length(c: Circuit) -> int:
    """Exact length ``compile_circuit`` will produce, without building it."""
    lengths: list[int] = []
    for node in c.nodes:
        if node.kind == INPUT:
            lengths.append(1)
        elif node.kind == CONST:
            lengths.append(node.args[0])
        elif node.kind == NOT:
            lengths.append(max(lengths[node.args[0]], 1))
        elif node.kind == AND:
            a, b = node.args
            lengths.append(2 * lengths[a] + 2 * lengths[b])
        else:
            a, b = node.args
            lengths.append(2 * max(lengths[a], 1) + 2 * max(lengths[b], 1))
    return lengths[c.output]


def _reachable(c: Circuit) -> set[int]:
    live = {c.output}
    for idx in range(c.output, -1, -1):
        if idx in live and c.nodes[idx].kind in (NOT, AND, OR):
            live.update(c.nodes[idx].args)
    return live


def _precheck(c: Circuit, sigma: Perm5) -> int:
    _check_cycle(sigma, "sigma")
    if c.n < 1 and any(nd.kind == CONST for nd in c.nodes):
        raise ValueError("circuit has no input variables to attach constants to")
    expected = compiled_length(c)
    if expected > MAX_LENGTH:
        raise ResourceLimitError(
            f"compiled program would have {expected} instructions (limit {MAX_LENGTH})"
        )
    if expected > WARN_LENGTH:
        warnings.warn(f"compiled program will have {expected} instructions", ResourceWarning)
    return expected


def _postcheck(c: Circuit, prog: PermProgram, expected: int) -> PermProgram:
    bound = 4 ** depth(c)
    if len(prog) != expected or len(prog) > bound:
        raise AssertionError(
            f"compiled length {len(prog)} (predicted {expected}, bound 4^d = {bound})"
        )
    return prog


def compile_circuit(c: Circuit, sigma: Perm5 = DEFAULT_TARGET) -> PermProgram:
    """Compile ``c`` to a program that sigma-computes it.

    Builds the plan and spells it out; the result is identical to
    :func:`compile_circuit_direct`, only faster.
    """
    expected = _precheck(c, sigma)
    plan, root = compile_plan(c, sigma)
    return _postcheck(c, plan.expand(root), expected)


def compile_circuit_direct(c: Circuit, sigma: Perm5 = DEFAULT_TARGET) -> PermProgram:
    """Fold the gate rules over the circuit, one PermProgram per node."""
    expected = _precheck(c, sigma)
    live = _reachable(c)
    # Each node is compiled once; reusing the result for every consumer gives
    # exactly the tree expansion.
    progs: dict[int, PermProgram] = {}
    for idx, node in enumerate(c.nodes):
        if idx not in live:
            continue
        if node.kind == INPUT:
            progs[idx] = compile_literal(node.args[0], sigma, c.n)
        elif node.kind == CONST:
            progs[idx] = compile_const(node.args[0], sigma, c.n)
        elif node.kind == NOT:
            progs[idx] = compile_not(progs[node.args[0]])
        elif node.kind == AND:
            progs[idx] = compile_and(progs[node.args[0]], progs[node.args[1]], sigma)
        else:
            progs[idx] = compile_or(progs[node.args[0]], progs[node.args[1]], sigma)
    return _postcheck(c, progs[c.output], expected)


class ProgramPlan:
    """The compiler's output as a straight-line program over sub-programs.

    Each step is one of: the empty program, a single instruction, the
    concatenation of two earlier steps, an earlier step conjugated by ``g``,
    an earlier step reversed and inverted, or an earlier step with its final
    instruction multiplied on the right by ``h``.  :meth:`expand` spells the
    program out; :meth:`yields` evaluates it directly.
    """

    def __init__(self, n: int):
        self.n = n
        self.kinds: list[int] = []
        self.args: list[tuple[int, int, int]] = []
        self.lengths: list[int] = []
        self.targets: list[Perm5] = []

    def __len__(self) -> int:
        return len(self.kinds)

    def _add(self, kind, args, length, target) -> int:
        self.kinds.append(kind)
        self.args.append(args)
        self.lengths.append(length)
        self.targets.append(target)
        return len(self.kinds) - 1

    def empty(self, target: Perm5) -> int:
        return self._add(kernels.OP_EMPTY, (0, 0, 0), 0, target)

    def leaf(self, var: int, perm1: Perm5, perm0: Perm5, target: Perm5) -> int:
        return self._add(kernels.OP_LEAF, (var - 1, perm1.code, perm0.code), 1, target)

    def concat(self, a: int, b: int, target: Perm5) -> int:
        return self._add(kernels.OP_CONCAT, (a, b, 0), self.lengths[a] + self.lengths[b], target)

    def retarget(self, a: int, beta: Perm5) -> int:
        g = find_conjugator(self.targets[a], beta)
        if g == IDENTITY:
            return a
        return self._add(kernels.OP_CONJ, (a, g.code, 0), self.lengths[a], beta)

    def invert(self, a: int) -> int:
        return self._add(kernels.OP_INV, (a, 0, 0), self.lengths[a], inverse(self.targets[a]))

    def right_multiply(self, a: int, h: Perm5, target: Perm5) -> int:
        if self.lengths[a] == 0:
            raise ValueError("cannot right-multiply the last instruction of an empty program")
        return self._add(kernels.OP_RMUL, (a, h.code, 0), self.lengths[a], target)

    # -- the same construction as the flat compiler ------------------------

    def not_(self, a: int) -> int:
        t = self.targets[a]
        if self.lengths[a] == 0:
            return self.leaf(1, t, t, t)
        t_inv = inverse(t)
        return self.retarget(self.right_multiply(a, t_inv, t_inv), t)

    def and_(self, a: int, b: int, target: Perm5) -> int:
        s1, s2 = find_commutator_pair()
        ra = self.retarget(a, s1)
        rb = self.retarget(b, s2)
        comm = commutator(s1, s2)
        joined = self.concat(self.concat(self.concat(ra, rb, comm), self.invert(ra), comm),
                             self.invert(rb), comm)
        return self.retarget(joined, target)

    def or_(self, a: int, b: int, target: Perm5) -> int:
        return self.not_(self.and_(self.not_(a), self.not_(b), target))

    # -- consumers ---------------------------------------------------------

    def yields(self, root: int, masks) -> list[Perm5]:
        kinds = self.kinds
        a0 = [a[0] for a in self.args]
        a1 = [a[1] for a in self.args]
        a2 = [a[2] for a in self.args]
        # Only steps up to the root matter; later ones never feed it.
        end = root + 1
        codes = kernels.plan_yields(kinds[:end], a0[:end], a1[:end], a2[:end], root,
                                    list(masks), COMPOSE_TABLE, INVERSE_TABLE)
        return [ALL_PERMS[c] for c in codes]

    def expand(self, root: int, limit: int = MAX_LENGTH) -> PermProgram:
        if self.lengths[root] > limit:
            raise ResourceLimitError(
                f"program has {self.lengths[root]} instructions (limit {limit})"
            )
        # Work on (var, code1, code0) triples through the flat tables, then
        # intern one Instruction object per distinct triple.
        table, inv, conj = COMPOSE_TABLE, INVERSE_TABLE, CONJUGATE_TABLE
        memo: dict[int, list[tuple[int, int, int]]] = {}
        for i in range(root + 1):
            kind = self.kinds[i]
            x, y, z = self.args[i]
            if kind == kernels.OP_EMPTY:
                memo[i] = []
            elif kind == kernels.OP_LEAF:
                memo[i] = [(x + 1, y, z)]
            elif kind == kernels.OP_CONCAT:
                memo[i] = memo[x] + memo[y]
            elif kind == kernels.OP_CONJ:
                g = y * 120
                memo[i] = [(v, conj[g + c1], conj[g + c0]) for v, c1, c0 in memo[x]]
            elif kind == kernels.OP_INV:
                memo[i] = [(v, inv[c1], inv[c0]) for v, c1, c0 in reversed(memo[x])]
            else:
                body = memo[x]
                v, c1, c0 = body[-1]
                memo[i] = body[:-1] + [(v, table[c1 * 120 + y], table[c0 * 120 + y])]
        interned: dict[tuple[int, int, int], Instruction] = {}
        out = []
        for key in memo[root]:
            ins = interned.get(key)
            if ins is None:
                ins = interned[key] = Instruction(key[0], ALL_PERMS[key[1]], ALL_PERMS[key[2]])
            out.append(ins)
        return PermProgram(self.n, tuple(out), self.targets[root])


def compile_plan(c: Circuit, sigma: Perm5 = DEFAULT_TARGET) -> tuple[ProgramPlan, int]:
    """Build the plan for ``c``; returns ``(plan, root)``.

    ``plan.expand(root)`` equals ``compile_circuit_direct(c, sigma)``
    instruction for instruction.  ``plan.lengths[root]`` is the exact program length.
    """
    _check_cycle(sigma, "sigma")
    plan = ProgramPlan(c.n)
    live = _reachable(c)
    step: dict[int, int] = {}
    for idx, node in enumerate(c.nodes):
        if idx not in live:
            continue
        if node.kind == INPUT:
            step[idx] = plan.leaf(node.args[0], sigma, IDENTITY, sigma)
        elif node.kind == CONST:
            if node.args[0]:
                if c.n < 1:
                    raise ValueError("constant 1 needs at least one input variable to attach to")
                step[idx] = plan.leaf(1, sigma, sigma, sigma)
            else:
                step[idx] = plan.empty(sigma)
        elif node.kind == NOT:
            step[idx] = plan.not_(step[node.args[0]])
        elif node.kind == AND:
            step[idx] = plan.and_(step[node.args[0]], step[node.args[1]], sigma)
        else:
            step[idx] = plan.or_(step[node.args[0]], step[node.args[1]], sigma)
    root = step[c.output]
    if plan.lengths[root] > 4 ** depth(c):
        raise AssertionError(f"plan length {plan.lengths[root]} exceeds 4^depth")
    return plan, root
