"""Exact algebra over the symmetric group S5.

Permutations act on the states {1, ..., 5}.  Composition is left to right:
``compose(p, q)`` applies ``p`` first and then ``q``, so ``compose(p, q)(s)
== q(p(s))``.  This is the order in which a permutation program applies its
instructions, and every module in the package relies on it.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

__all__ = [
    "Perm5",
    "NotFiveCycle",
    "IDENTITY",
    "ALL_PERMS",
    "FIVE_CYCLES",
    "COMPOSE_TABLE",
    "INVERSE_TABLE",
    "CONJUGATE_TABLE",
    "compose",
    "inverse",
    "conjugate",
    "commutator",
    "cycle_type",
    "is_five_cycle",
    "find_conjugator",
    "find_commutator_pair",
]


class NotFiveCycle(ValueError):
    """Raised when an operation needs a 5-cycle and gets something else."""


class Perm5(tuple):
    """A permutation of {1, ..., 5} stored as its image sequence.

    ``Perm5((2, 3, 4, 5, 1))`` sends 1 to 2, 2 to 3 and so on.  Calling the
    permutation on a state returns its image.  The textual form is the five
    image digits, e.g. ``"23451"``.
    """

    __slots__ = ()

    def __new__(cls, images):
        images = tuple(int(v) for v in images)
        if sorted(images) != [1, 2, 3, 4, 5]:
            raise ValueError(f"not a permutation of 1..5: {images!r}")
        return super().__new__(cls, images)

    @classmethod
    def parse(cls, text: str) -> "Perm5":
        text = text.strip()
        if len(text) != 5 or not all(ch in "12345" for ch in text):
            raise ValueError(f"bad permutation text {text!r}")
        return cls(int(ch) for ch in text)

    def __call__(self, s: int) -> int:
        return self[s - 1]

    def __str__(self) -> str:
        return "".join(map(str, self))

    def __repr__(self) -> str:
        return f"Perm5('{self}')"

    @property
    def code(self) -> int:
        """Index of this permutation in the lexicographic order of S5."""
        return _CODE[self]


ALL_PERMS: tuple[Perm5, ...] = tuple(Perm5(p) for p in permutations(range(1, 6)))
_CODE = {p: i for i, p in enumerate(ALL_PERMS)}
IDENTITY = ALL_PERMS[0]

# Flat lookup tables indexed by permutation code (also used by the batch
# kernels): COMPOSE_TABLE[a * 120 + b] is the code of a-then-b.
COMPOSE_TABLE: tuple[int, ...] = tuple(
    _CODE[tuple(q[v - 1] for v in p)] for p in ALL_PERMS for q in ALL_PERMS
)
INVERSE_TABLE: tuple[int, ...] = tuple(
    _CODE[tuple(sorted(range(1, 6), key=lambda s: p[s - 1]))] for p in ALL_PERMS
)

# CONJUGATE_TABLE[g * 120 + p] is the code of g^-1 p g.
CONJUGATE_TABLE: tuple[int, ...] = tuple(
    COMPOSE_TABLE[COMPOSE_TABLE[INVERSE_TABLE[g] * 120 + p] * 120 + g]
    for g in range(120) for p in range(120)
)


def compose(p: Perm5, q: Perm5) -> Perm5:
    """Apply ``p`` first, then ``q``."""
    return ALL_PERMS[COMPOSE_TABLE[_CODE[p] * 120 + _CODE[q]]]


def inverse(p: Perm5) -> Perm5:
    return ALL_PERMS[INVERSE_TABLE[_CODE[p]]]


def conjugate(p: Perm5, g: Perm5) -> Perm5:
    """Return g^-1 p g, i.e. ``compose(compose(inverse(g), p), g)``."""
    return ALL_PERMS[CONJUGATE_TABLE[_CODE[g] * 120 + _CODE[p]]]


def commutator(a: Perm5, b: Perm5) -> Perm5:
    """Return a b a^-1 b^-1 under the left-to-right convention."""
    return compose(compose(compose(a, b), inverse(a)), inverse(b))


def cycle_type(p: Perm5) -> tuple[int, ...]:
    """Sorted cycle lengths, fixed points included."""
    seen = set()
    lengths = []
    for start in range(1, 6):
        if start in seen:
            continue
        length = 0
        s = start
        while s not in seen:
            seen.add(s)
            s = p[s - 1]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


_FIVE_CYCLE_CODES = frozenset(i for i, p in enumerate(ALL_PERMS) if cycle_type(p) == (5,))


def is_five_cycle(p: Perm5) -> bool:
    return _CODE.get(p) in _FIVE_CYCLE_CODES


FIVE_CYCLES: tuple[Perm5, ...] = tuple(ALL_PERMS[i] for i in sorted(_FIVE_CYCLE_CODES))


def _require_five_cycle(p: Perm5, what: str) -> None:
    if not is_five_cycle(p):
        raise NotFiveCycle(f"{what} must be a 5-cycle, got {p}")


@lru_cache(maxsize=None)
def find_conjugator(alpha: Perm5, beta: Perm5) -> Perm5:
    """Lexicographically smallest g with ``conjugate(alpha, g) == beta``."""
    _require_five_cycle(alpha, "alpha")
    _require_five_cycle(beta, "beta")
    for g in ALL_PERMS:
        if conjugate(alpha, g) == beta:
            return g
    raise AssertionError(f"no conjugator from {alpha} to {beta}")


@lru_cache(maxsize=None)
def find_commutator_pair() -> tuple[Perm5, Perm5]:
    """First pair of 5-cycles, in lexicographic order, whose commutator is a 5-cycle."""
    for a in FIVE_CYCLES:
        for b in FIVE_CYCLES:
            if is_five_cycle(commutator(a, b)):
                return a, b
    raise AssertionError("S5 has no pair of 5-cycles with a 5-cycle commutator")
