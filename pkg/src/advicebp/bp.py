"""Width-5 permutation programs and leveled branching programs.

A :class:`PermProgram` is a list of instructions ``(var, perm1, perm0)``;
on input ``x`` it yields the left-to-right product of ``perm1`` or ``perm0``
depending on ``x[var]``.  It computes 1 when the yield equals its target
5-cycle and 0 when the yield is the identity.

A :class:`GeneralBP` is a leveled branching program: every non-sink node
tests one variable and its two edges point into the next level; the final
level consists of sinks labeled 0 or 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import kernels
from .perm5 import (
    ALL_PERMS,
    COMPOSE_TABLE,
    IDENTITY,
    Perm5,
    compose,
    is_five_cycle,
    NotFiveCycle,
)

__all__ = [
    "Instruction",
    "PermProgram",
    "BPNode",
    "GeneralBP",
    "IllFormedProgram",
    "BPFormatError",
    "concat",
    "yield_perm",
    "eval_perm_bp",
    "eval_general_bp",
    "perm_to_general",
    "width",
    "perm_yields",
    "bp_truth_table",
    "format_perm_program",
    "parse_perm_program",
    "format_general_bp",
    "parse_general_bp",
    "load_bp",
]


class IllFormedProgram(RuntimeError):
    """A program yielded something other than identity or its target."""


class BPFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Instruction:
    var: int
    perm1: Perm5
    perm0: Perm5


@dataclass(frozen=True)
class PermProgram:
    n: int
    instructions: tuple[Instruction, ...]
    target: Perm5

    def __post_init__(self):
        if not is_five_cycle(self.target):
            raise NotFiveCycle(f"program target must be a 5-cycle, got {self.target}")
        for ins in self.instructions:
            if not 1 <= ins.var <= self.n:
                raise ValueError(f"instruction variable x{ins.var} out of range 1..{self.n}")

    @classmethod
    def _derived(cls, n: int, instructions, target: Perm5) -> "PermProgram":
        # For transforms of an already-validated program: variables are unchanged,
        # so only the target needs checking.
        if not is_five_cycle(target):
            raise NotFiveCycle(f"program target must be a 5-cycle, got {target}")
        self = object.__new__(cls)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "instructions", instructions)
        object.__setattr__(self, "target", target)
        return self

    def __len__(self) -> int:
        return len(self.instructions)

    def __call__(self, x) -> int:
        return eval_perm_bp(self, x)


def concat(p: PermProgram, q: PermProgram, target: Perm5 | None = None) -> PermProgram:
    """Instruction sequence of ``p`` followed by ``q``; target defaults to ``p``'s."""
    if p.n != q.n:
        raise ValueError(f"input-length mismatch: {p.n} vs {q.n}")
    return PermProgram(p.n, p.instructions + q.instructions, target or p.target)


def yield_perm(p: PermProgram, x) -> Perm5:
    if len(x) != p.n:
        raise ValueError(f"input has length {len(x)}, program expects {p.n}")
    y = IDENTITY
    for ins in p.instructions:
        y = compose(y, ins.perm1 if x[ins.var - 1] else ins.perm0)
    return y


def eval_perm_bp(p: PermProgram, x) -> int:
    y = yield_perm(p, x)
    if y == p.target:
        return 1
    if y == IDENTITY:
        return 0
    raise IllFormedProgram(f"yield {y} is neither identity nor target {p.target}")


def perm_yields(p: PermProgram, masks) -> list[Perm5]:
    """Yields for many inputs at once (bit i of a mask is x_{i+1})."""
    var_idx = [ins.var - 1 for ins in p.instructions]
    c1 = [ins.perm1.code for ins in p.instructions]
    c0 = [ins.perm0.code for ins in p.instructions]
    codes = kernels.perm_yields(var_idx, c1, c0, list(masks), COMPOSE_TABLE)
    return [ALL_PERMS[c] for c in codes]


@dataclass(frozen=True)
class BPNode:
    var: int
    e0: int
    e1: int


@dataclass(frozen=True)
class GeneralBP:
    """Leveled branching program.

    ``levels`` holds the non-sink levels; ``sinks`` holds the labels of the
    final level.  Edges are indices into the following level.  ``start``
    indexes level 0, which is the sink level when ``levels`` is empty.
    """

    n: int
    levels: tuple[tuple[BPNode, ...], ...]
    sinks: tuple[int, ...]
    start: int

    def __post_init__(self):
        sizes = [len(level) for level in self.levels] + [len(self.sinks)]
        if any(size == 0 for size in sizes):
            raise ValueError("every level needs at least one node")
        for t, level in enumerate(self.levels):
            nxt = sizes[t + 1]
            for j, node in enumerate(level):
                if not 1 <= node.var <= self.n:
                    raise ValueError(f"node {t}:{j} tests x{node.var}, out of range 1..{self.n}")
                if not (0 <= node.e0 < nxt and 0 <= node.e1 < nxt):
                    raise ValueError(f"node {t}:{j} has an edge outside level {t + 1}")
        if any(label not in (0, 1) for label in self.sinks):
            raise ValueError("sink labels must be 0 or 1")
        if not 0 <= self.start < sizes[0]:
            raise ValueError("start node out of range")

    @property
    def length(self) -> int:
        return len(self.levels)

    def __call__(self, x) -> int:
        return eval_general_bp(self, x)

    def kernel_arrays(self):
        sizes, var_idx, e0, e1 = [], [], [], []
        for level in self.levels:
            sizes.append(len(level))
            for node in level:
                var_idx.append(node.var - 1)
                e0.append(node.e0)
                e1.append(node.e1)
        return sizes, var_idx, e0, e1


def eval_general_bp(b: GeneralBP, x) -> int:
    if len(x) != b.n:
        raise ValueError(f"input has length {len(x)}, program expects {b.n}")
    node = b.start
    for level in b.levels:
        nd = level[node]
        node = nd.e1 if x[nd.var - 1] else nd.e0
    return b.sinks[node]


def bp_truth_table(b: GeneralBP, masks) -> list[int]:
    sizes, var_idx, e0, e1 = b.kernel_arrays()
    return kernels.bp_eval(sizes, var_idx, e0, e1, list(b.sinks), b.start, list(masks))


def perm_to_general(p: PermProgram) -> GeneralBP:
    levels = tuple(
        tuple(BPNode(ins.var, ins.perm0(s) - 1, ins.perm1(s) - 1) for s in range(1, 6))
        for ins in p.instructions
    )
    accept = p.target(1)
    sinks = tuple(1 if s == accept else 0 for s in range(1, 6))
    return GeneralBP(p.n, levels, sinks, 0)


def width(b: GeneralBP) -> int:
    return max([len(level) for level in b.levels] + [len(b.sinks)])


# -- file formats -----------------------------------------------------------

def format_perm_program(p: PermProgram) -> str:
    lines = [f"permbp n={p.n} len={len(p)} target={p.target}"]
    lines.extend(f"instr {ins.var} {ins.perm1} {ins.perm0}" for ins in p.instructions)
    return "\n".join(lines) + "\n"


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _header_fields(line: str, lineno: int, kind: str, keys) -> dict[str, str]:
    toks = line.split()
    if not toks or toks[0] != kind:
        raise BPFormatError(f"expected '{kind}' header", lineno)
    fields = {}
    for tok in toks[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise BPFormatError(f"bad header field {tok!r}", lineno)
        fields[key] = value
    if set(fields) != set(keys):
        raise BPFormatError(f"header needs exactly the fields {', '.join(keys)}", lineno)
    return fields


def _int(value: str, lineno: int) -> int:
    if not value.isdigit():
        raise BPFormatError(f"expected a non-negative integer, got {value!r}", lineno)
    return int(value)


def _perm(text: str, lineno: int) -> Perm5:
    try:
        return Perm5.parse(text)
    except ValueError as exc:
        raise BPFormatError(str(exc), lineno) from None


def parse_perm_program(text: str) -> PermProgram:
    lines = list(_content_lines(text))
    if not lines:
        raise BPFormatError("empty file")
    lineno, header = lines[0]
    fields = _header_fields(header, lineno, "permbp", ("n", "len", "target"))
    n = _int(fields["n"], lineno)
    length = _int(fields["len"], lineno)
    target = _perm(fields["target"], lineno)
    body = lines[1:]
    if len(body) != length:
        raise BPFormatError(f"header declares {length} instructions, found {len(body)}")
    instrs = []
    for lineno, line in body:
        toks = line.split()
        if len(toks) != 4 or toks[0] != "instr":
            raise BPFormatError("expected 'instr VAR PERM1 PERM0'", lineno)
        var = _int(toks[1], lineno)
        if not 1 <= var <= n:
            raise BPFormatError(f"variable {var} out of range 1..{n}", lineno)
        instrs.append(Instruction(var, _perm(toks[2], lineno), _perm(toks[3], lineno)))
    try:
        return PermProgram(n, tuple(instrs), target)
    except ValueError as exc:
        raise BPFormatError(str(exc)) from None


def format_general_bp(b: GeneralBP) -> str:
    lines = [f"genbp n={b.n} levels={b.length + 1} width={width(b)}"]
    for t, level in enumerate(b.levels):
        for j, node in enumerate(level):
            lines.append(f"node {t}:{j} var={node.var} e0={node.e0} e1={node.e1}")
    for j, label in enumerate(b.sinks):
        lines.append(f"sink {b.length}:{j} label={label}")
    lines.append(f"start {b.start}")
    return "\n".join(lines) + "\n"


_NODE_RE = re.compile(r"node (\d+):(\d+) var=(\d+) e0=(\d+) e1=(\d+)\Z")
_SINK_RE = re.compile(r"sink (\d+):(\d+) label=([01])\Z")


def parse_general_bp(text: str) -> GeneralBP:
    lines = list(_content_lines(text))
    if not lines:
        raise BPFormatError("empty file")
    lineno, header = lines[0]
    fields = _header_fields(header, lineno, "genbp", ("n", "levels", "width"))
    n = _int(fields["n"], lineno)
    nlevels = _int(fields["levels"], lineno)
    declared_width = _int(fields["width"], lineno)
    if nlevels < 1:
        raise BPFormatError("need at least the sink level", lineno)
    inner: list[dict[int, BPNode]] = [dict() for _ in range(nlevels - 1)]
    sinks: dict[int, int] = {}
    start = None
    for lineno, line in lines[1:]:
        line = " ".join(line.split())
        if m := _NODE_RE.match(line):
            t, j, var, e0, e1 = map(int, m.groups())
            if t >= nlevels - 1:
                raise BPFormatError(f"inner node on level {t}; sinks only on level {nlevels - 1}", lineno)
            if j in inner[t]:
                raise BPFormatError(f"duplicate node {t}:{j}", lineno)
            inner[t][j] = BPNode(var, e0, e1)
        elif m := _SINK_RE.match(line):
            t, j, label = map(int, m.groups())
            if t != nlevels - 1:
                raise BPFormatError(f"sink on level {t}; only level {nlevels - 1} holds sinks", lineno)
            if j in sinks:
                raise BPFormatError(f"duplicate sink {t}:{j}", lineno)
            sinks[j] = label
        elif line.startswith("start "):
            if start is not None:
                raise BPFormatError("duplicate start line", lineno)
            start = _int(line[6:].strip(), lineno)
        else:
            raise BPFormatError(f"cannot parse {line!r}", lineno)
    if start is None:
        raise BPFormatError("missing start line")

    def dense(d: dict, what: str):
        if sorted(d) != list(range(len(d))):
            raise BPFormatError(f"{what} indices are not contiguous from 0")
        return tuple(d[j] for j in range(len(d)))

    levels = tuple(dense(level, f"level {t}") for t, level in enumerate(inner))
    sink_labels = dense(sinks, "sink")
    try:
        b = GeneralBP(n, levels, sink_labels, start)
    except ValueError as exc:
        raise BPFormatError(str(exc)) from None
    if width(b) != declared_width:
        raise BPFormatError(f"header declares width {declared_width}, actual width is {width(b)}")
    return b


def load_bp(path):
    """Load either file kind, dispatching on the header keyword."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    for _, line in _content_lines(text):
        if line.startswith("permbp"):
            return parse_perm_program(text)
        if line.startswith("genbp"):
            return parse_general_bp(text)
        break
    raise BPFormatError(f"{path}: not a permbp or genbp file")
