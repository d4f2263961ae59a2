"""Convert leveled branching programs into shallow circuits.

Level ``t`` of a branching program is a 0/1 transition matrix whose entries
are literals of the variable tested at each node.  The program accepts iff
the start row of the product of all level matrices has a 1 in a column
labeled 1.  The product is built as a balanced tree of Boolean matrix
products, so a program of width ``w`` and length ``L`` becomes a circuit of
AND/OR depth at most ``(clog2(w) + 1) * clog2(L) + clog2(w) + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bp import GeneralBP, width
from .circuit import Circuit, CircuitBuilder, depth

__all__ = [
    "Entry",
    "CONST0",
    "CONST1",
    "LiteralMatrix",
    "clog2",
    "depth_bound",
    "level_matrix",
    "bool_matrix_product",
    "bp_to_circuit",
]


def clog2(v: int) -> int:
    """Ceiling of log2, with clog2(0) = clog2(1) = 0."""
    return max(v - 1, 0).bit_length()


def depth_bound(w: int, length: int) -> int:
    lw = clog2(w)
    return (lw + 1) * clog2(length) + lw + 1


@dataclass(frozen=True)
class Entry:
    """A matrix entry: ``const`` 0/1, ``pos``/``neg`` literal of a variable,
    or ``node``, a reference into the circuit under construction."""

    kind: str
    ref: int = 0

    def __str__(self):
        if self.kind == "const":
            return str(self.ref)
        if self.kind == "pos":
            return f"x{self.ref}"
        if self.kind == "neg":
            return f"~x{self.ref}"
        return f"@{self.ref}"


CONST0 = Entry("const", 0)
CONST1 = Entry("const", 1)


@dataclass(frozen=True)
class LiteralMatrix:
    rows: tuple[tuple[Entry, ...], ...]

    @property
    def w_out(self) -> int:
        return len(self.rows)

    @property
    def w_in(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, uv):
        u, v = uv
        return self.rows[u][v]


def level_matrix(b: GeneralBP, t: int) -> LiteralMatrix:
    if not 0 <= t < b.length:
        raise IndexError(f"level {t} out of range 0..{b.length - 1}")
    nxt = len(b.levels[t + 1]) if t + 1 < b.length else len(b.sinks)
    rows = []
    for node in b.levels[t]:
        row = []
        for v in range(nxt):
            on0, on1 = node.e0 == v, node.e1 == v
            if on0 and on1:
                row.append(CONST1)
            elif on1:
                row.append(Entry("pos", node.var))
            elif on0:
                row.append(Entry("neg", node.var))
            else:
                row.append(CONST0)
        rows.append(tuple(row))
    return LiteralMatrix(tuple(rows))


def _node(entry: Entry, builder: CircuitBuilder) -> int:
    if entry.kind == "const":
        return builder.const(entry.ref)
    if entry.kind == "pos":
        return builder.var(entry.ref)
    if entry.kind == "neg":
        return builder.not_(builder.var(entry.ref))
    return entry.ref


def _entry(idx: int, builder: CircuitBuilder) -> Entry:
    c = builder.const_value(idx)
    if c is not None:
        return CONST1 if c else CONST0
    return Entry("node", idx)


def _balanced(terms: list[int], combine) -> int:
    while len(terms) > 1:
        paired = [combine(terms[i], terms[i + 1]) for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            paired.append(terms[-1])
        terms = paired
    return terms[0]


def bool_matrix_product(a: LiteralMatrix, b: LiteralMatrix, builder: CircuitBuilder) -> LiteralMatrix:
    """Entry (u, v) is OR_m AND(a[u, m], b[m, v]), the OR as a balanced tree."""
    if a.w_in != b.w_out:
        raise ValueError(f"dimension mismatch: {a.w_out}x{a.w_in} times {b.w_out}x{b.w_in}")
    rows = []
    for u in range(a.w_out):
        row = []
        for v in range(b.w_in):
            terms = []
            for m in range(a.w_in):
                x, y = a[u, m], b[m, v]
                if x == CONST0 or y == CONST0:
                    continue
                terms.append(builder.and_(_node(x, builder), _node(y, builder)))
            terms = [t for t in terms if builder.const_value(t) != 0]
            if not terms:
                row.append(CONST0)
            else:
                row.append(_entry(_balanced(terms, builder.or_), builder))
        rows.append(tuple(row))
    return LiteralMatrix(tuple(rows))


def _range_product(b: GeneralBP, lo: int, hi: int, builder: CircuitBuilder) -> LiteralMatrix:
    if hi - lo == 1:
        return level_matrix(b, lo)
    mid = (lo + hi) // 2
    left = _range_product(b, lo, mid, builder)
    right = _range_product(b, mid, hi, builder)
    return bool_matrix_product(left, right, builder)


def bp_to_circuit(b: GeneralBP) -> Circuit:
    builder = CircuitBuilder(b.n)
    accepting = [v for v, label in enumerate(b.sinks) if label == 1]
    if b.length == 0:
        out = builder.const(b.sinks[b.start])
    else:
        reach = _range_product(b, 0, b.length, builder)
        terms = [_node(reach[b.start, v], builder) for v in accepting]
        terms = [t for t in terms if builder.const_value(t) != 0]
        out = _balanced(terms, builder.or_) if terms else builder.const(0)
    c = builder.build(out)
    bound = depth_bound(width(b), b.length)
    d = depth(c)
    if d > bound:
        raise AssertionError(f"converted circuit has depth {d}, bound is {bound}")
    return c
