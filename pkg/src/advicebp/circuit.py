"""Fan-in-2 Boolean circuits: netlist parsing, evaluation and depth.

Netlist format::

    # comment
    inputs 3
    g1 = AND x1 x2
    g2 = NOT g1
    g3 = OR g2 x3
    output g3

Arguments are ``xK`` (1-indexed input), ``0``, ``1`` or an earlier gate
name.  Depth counts AND/OR gates only; NOT gates are free, because negating
a permutation program does not change its length.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import kernels

__all__ = [
    "Node",
    "Circuit",
    "CircuitBuilder",
    "CircuitParseError",
    "parse_circuit",
    "format_circuit",
    "load_circuit",
    "eval_circuit",
    "depth",
    "gate_count",
    "truth_table",
]

INPUT, CONST, NOT, AND, OR = "INPUT", "CONST", "NOT", "AND", "OR"
_KIND_CODES = {INPUT: 0, CONST: 1, NOT: 2, AND: 3, OR: 4}

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_VAR_RE = re.compile(r"x([0-9]+)\Z")
_RESERVED = {"inputs", "output", "AND", "OR", "NOT"}


class CircuitParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Node:
    """One circuit node.

    For INPUT ``args`` is ``(i,)`` with 1 <= i <= n, for CONST it is
    ``(bit,)``; for gates it holds operand node indices.
    """

    kind: str
    args: tuple[int, ...]

    @classmethod
    def input(cls, i: int) -> "Node":
        return cls(INPUT, (i,))

    @classmethod
    def const(cls, bit: int) -> "Node":
        return cls(CONST, (bit,))


@dataclass(frozen=True)
class Circuit:
    n: int
    nodes: tuple[Node, ...]
    output: int
    # Gate names for serialization; ``None`` entries get generated names.
    names: tuple[str | None, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative input count")
        for idx, node in enumerate(self.nodes):
            if node.kind == INPUT:
                (i,) = node.args
                if not 1 <= i <= self.n:
                    raise ValueError(f"node {idx}: input index x{i} out of range 1..{self.n}")
            elif node.kind == CONST:
                if node.args not in ((0,), (1,)):
                    raise ValueError(f"node {idx}: bad constant {node.args}")
            elif node.kind in (AND, OR, NOT):
                arity = 1 if node.kind == NOT else 2
                if len(node.args) != arity:
                    raise ValueError(f"node {idx}: {node.kind} needs {arity} operands")
                if any(not 0 <= a < idx for a in node.args):
                    raise ValueError(f"node {idx}: operand does not precede the gate")
            else:
                raise ValueError(f"node {idx}: unknown kind {node.kind!r}")
        if not 0 <= self.output < len(self.nodes):
            raise ValueError("output does not refer to a node")

    def __call__(self, x) -> int:
        return eval_circuit(self, x)

    def kernel_arrays(self):
        """Flat (kinds, arg0, arg1) lists in the layout the batch kernels expect."""
        kinds, a0, a1 = [], [], []
        for node in self.nodes:
            kinds.append(_KIND_CODES[node.kind])
            if node.kind == INPUT:
                a0.append(node.args[0] - 1)
                a1.append(0)
            else:
                a0.append(node.args[0])
                a1.append(node.args[1] if len(node.args) == 2 else 0)
        return kinds, a0, a1


class CircuitBuilder:
    """Incremental construction with hash-consing and constant folding."""

    def __init__(self, n: int):
        self.n = n
        self.nodes: list[Node] = []
        self._index: dict[Node, int] = {}

    def _add(self, node: Node) -> int:
        idx = self._index.get(node)
        if idx is None:
            idx = len(self.nodes)
            self.nodes.append(node)
            self._index[node] = idx
        return idx

    def const(self, bit: int) -> int:
        return self._add(Node.const(bit))

    def var(self, i: int) -> int:
        return self._add(Node.input(i))

    def const_value(self, idx: int) -> int | None:
        node = self.nodes[idx]
        return node.args[0] if node.kind == CONST else None

    def not_(self, a: int) -> int:
        c = self.const_value(a)
        if c is not None:
            return self.const(1 - c)
        node = self.nodes[a]
        if node.kind == NOT:
            return node.args[0]
        return self._add(Node(NOT, (a,)))

    def and_(self, a: int, b: int) -> int:
        ca, cb = self.const_value(a), self.const_value(b)
        if ca == 0 or cb == 0:
            return self.const(0)
        if ca == 1:
            return b
        if cb == 1 or a == b:
            return a
        return self._add(Node(AND, (min(a, b), max(a, b))))

    def or_(self, a: int, b: int) -> int:
        ca, cb = self.const_value(a), self.const_value(b)
        if ca == 1 or cb == 1:
            return self.const(1)
        if ca == 0:
            return b
        if cb == 0 or a == b:
            return a
        return self._add(Node(OR, (min(a, b), max(a, b))))

    def build(self, output: int, prune: bool = True) -> Circuit:
        """Freeze into a Circuit; ``prune`` drops nodes the output does not reach."""
        if not prune:
            return Circuit(self.n, tuple(self.nodes), output)
        live = {output}
        for idx in range(output, -1, -1):
            if idx in live and self.nodes[idx].kind in (NOT, AND, OR):
                live.update(self.nodes[idx].args)
        remap = {}
        nodes = []
        for idx, node in enumerate(self.nodes):
            if idx not in live:
                continue
            if node.kind in (NOT, AND, OR):
                node = Node(node.kind, tuple(remap[a] for a in node.args))
            remap[idx] = len(nodes)
            nodes.append(node)
        return Circuit(self.n, tuple(nodes), remap[output])


def parse_circuit(text: str) -> Circuit:
    n = None
    nodes: list[Node] = []
    names: list[str | None] = []
    env: dict[str, int] = {}
    output = None

    def operand(tok: str, lineno: int) -> int:
        if tok in ("0", "1"):
            key = tok
            node = Node.const(int(tok))
        else:
            m = _VAR_RE.match(tok)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= n:
                    raise CircuitParseError(f"input index {tok} out of range 1..{n}", lineno)
                key = f"x{i}"
                node = Node.input(i)
            elif tok in env:
                return env[tok]
            else:
                raise CircuitParseError(f"undefined name {tok!r}", lineno)
        if key not in env:
            env[key] = len(nodes)
            nodes.append(node)
            names.append(None)
        return env[key]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if output is not None:
            raise CircuitParseError("content after output line", lineno)
        toks = line.split()
        if n is None:
            if len(toks) != 2 or toks[0] != "inputs" or not toks[1].isdigit():
                raise CircuitParseError("expected 'inputs N'", lineno)
            n = int(toks[1])
            continue
        if toks[0] == "output" and (len(toks) < 2 or toks[1] != "="):
            if len(toks) != 2:
                raise CircuitParseError("expected 'output ARG'", lineno)
            output = operand(toks[1], lineno)
            continue
        if len(toks) < 4 or toks[1] != "=":
            raise CircuitParseError(f"cannot parse {line!r}", lineno)
        name, op, args = toks[0], toks[2], toks[3:]
        if not _NAME_RE.match(name) or _VAR_RE.match(name) or name in _RESERVED:
            raise CircuitParseError(f"illegal gate name {name!r}", lineno)
        if name in env:
            raise CircuitParseError(f"duplicate definition of {name!r}", lineno)
        if op not in (AND, OR, NOT):
            raise CircuitParseError(f"unknown operation {op!r}", lineno)
        arity = 1 if op == NOT else 2
        if len(args) != arity:
            raise CircuitParseError(f"{op} takes {arity} argument(s), got {len(args)}", lineno)
        operands = tuple(operand(a, lineno) for a in args)
        env[name] = len(nodes)
        nodes.append(Node(op, operands))
        names.append(name)

    if n is None:
        raise CircuitParseError("missing 'inputs N' line")
    if output is None:
        raise CircuitParseError("missing output line")
    return Circuit(n, tuple(nodes), output, tuple(names))


def format_circuit(c: Circuit) -> str:
    """Serialize to the netlist format; ``parse_circuit`` inverts this."""
    refs: list[str] = []
    taken = {name for name in c.names if name}
    lines = [f"inputs {c.n}"]
    counter = 0
    for idx, node in enumerate(c.nodes):
        if node.kind == INPUT:
            refs.append(f"x{node.args[0]}")
            continue
        if node.kind == CONST:
            refs.append(str(node.args[0]))
            continue
        name = c.names[idx] if idx < len(c.names) else None
        if not name:
            counter += 1
            while f"g{counter}" in taken:
                counter += 1
            name = f"g{counter}"
        refs.append(name)
        lines.append(f"{name} = {node.kind} " + " ".join(refs[a] for a in node.args))
    lines.append(f"output {refs[c.output]}")
    return "\n".join(lines) + "\n"


def load_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_circuit(fh.read())


def eval_circuit(c: Circuit, x) -> int:
    if len(x) != c.n:
        raise ValueError(f"assignment has length {len(x)}, circuit expects {c.n}")
    values = []
    for node in c.nodes:
        k, args = node.kind, node.args
        if k == INPUT:
            values.append(1 if x[args[0] - 1] else 0)
        elif k == CONST:
            values.append(args[0])
        elif k == NOT:
            values.append(1 - values[args[0]])
        elif k == AND:
            values.append(values[args[0]] & values[args[1]])
        else:
            values.append(values[args[0]] | values[args[1]])
    return values[c.output]


def truth_table(c: Circuit, masks) -> list[int]:
    """Evaluate on many inputs; bit i of each mask is the value of x_{i+1}."""
    kinds, a0, a1 = c.kernel_arrays()
    return kernels.circuit_eval(kinds, a0, a1, c.output, list(masks))


def depth(c: Circuit) -> int:
    """Longest leaf-to-output path counted in AND/OR gates (NOT is free)."""
    d = []
    for node in c.nodes:
        if node.kind in (INPUT, CONST):
            d.append(0)
        elif node.kind == NOT:
            d.append(d[node.args[0]])
        else:
            d.append(1 + max(d[a] for a in node.args))
    return d[c.output]


def gate_count(c: Circuit) -> int:
    return sum(1 for node in c.nodes if node.kind in (NOT, AND, OR))
