"""Advice tapes for width-5 permutation programs and the machine that reads them.

Tape grammar (one character per symbol)::

    B ( I <var-block> <perm1> <perm0> )* A <accept-block> E

``<var-block>`` has one slot per input variable, ``m`` at the tested
variable and ``u`` elsewhere; the permutations are five digits each; the
accept block holds ``a`` at the state the machine must finish in and ``r``
at the other four.

The machine reads the advice strictly left to right and the input with a
two-way head between end markers.  It has no work tape: its only mutable
storage is the control state, the current program state ``s``, the current
input bit ``b`` and a digit counter ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import kernels
from .bp import Instruction, PermProgram
from .perm5 import FIVE_CYCLES, Perm5

__all__ = [
    "ALPHABET",
    "AdviceTape",
    "AdviceGrammarError",
    "InputLengthMismatch",
    "TraceStats",
    "Tape",
    "Control",
    "AdviceMachine",
    "REGISTER_BOUND",
    "encode_advice",
    "decode_advice",
    "run_tm",
    "load_advice",
    "save_advice",
]

ALPHABET = frozenset("BIum12345AarE")
LEFT_END, RIGHT_END = "<", ">"


class AdviceGrammarError(ValueError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"offset {offset}: {message}")


class InputLengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class AdviceTape:
    symbols: str
    n: int

    def __post_init__(self):
        _check_grammar(self.symbols, self.n)

    def __str__(self) -> str:
        return self.symbols

    def __len__(self) -> int:
        return len(self.symbols)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "AdviceTape":
        """Parse raw tape text, inferring ``n`` from the first variable block.

        An empty program carries no variable blocks; its ``n`` is 0 unless
        given explicitly.
        """
        if text.endswith("\n"):
            text = text[:-1]
        if n is None:
            n = _infer_n(text)
        return cls(text, n)


def _infer_n(symbols: str) -> int:
    if len(symbols) < 2 or symbols[0] != "B" or symbols[1] != "I":
        return 0
    i = 2
    while i < len(symbols) and symbols[i] in "um":
        i += 1
    return i - 2


def _check_grammar(symbols: str, n: int) -> None:
    def expect(pos, allowed, what):
        if pos >= len(symbols):
            raise AdviceGrammarError(f"tape ends early, expected {what}", pos)
        if symbols[pos] not in allowed:
            raise AdviceGrammarError(f"expected {what}, found {symbols[pos]!r}", pos)

    for pos, ch in enumerate(symbols):
        if ch not in ALPHABET:
            raise AdviceGrammarError(f"symbol {ch!r} not in the advice alphabet", pos)
    expect(0, "B", "'B'")
    pos = 1
    while pos < len(symbols) and symbols[pos] == "I":
        pos += 1
        marks = 0
        for _ in range(n):
            expect(pos, "um", "a variable slot 'u'/'m'")
            marks += symbols[pos] == "m"
            pos += 1
        if pos < len(symbols) and symbols[pos] in "um":
            raise InputLengthMismatch(f"offset {pos}: variable block longer than n={n}")
        if marks != 1:
            raise AdviceGrammarError(f"variable block has {marks} marked slots", pos - n)
        for _ in range(2):
            start = pos
            for _ in range(5):
                expect(pos, "12345", "a permutation digit")
                pos += 1
            if sorted(symbols[start:pos]) != list("12345"):
                raise AdviceGrammarError("permutation block is not a permutation", start)
    expect(pos, "A", "'I' or 'A'")
    pos += 1
    start = pos
    for _ in range(5):
        expect(pos, "ar", "an accept slot 'a'/'r'")
        pos += 1
    expect(pos, "E", "'E'")
    if pos + 1 != len(symbols):
        raise AdviceGrammarError("symbols after 'E'", pos + 1)


def encode_advice(p: PermProgram) -> AdviceTape:
    parts = ["B"]
    for ins in p.instructions:
        parts.append("I")
        parts.append("".join("m" if v == ins.var else "u" for v in range(1, p.n + 1)))
        parts.append(str(ins.perm1))
        parts.append(str(ins.perm0))
    parts.append("A")
    accept = p.target(1)
    parts.append("".join("a" if s == accept else "r" for s in range(1, 6)))
    parts.append("E")
    return AdviceTape("".join(parts), p.n)


def decode_advice(t: AdviceTape) -> PermProgram:
    """Inverse of :func:`encode_advice` up to the choice of target.

    The tape only records where the target sends state 1, so the target is
    rebuilt as the smallest 5-cycle with that image of 1.
    """
    s = t.symbols
    block = t.n + 11
    instrs = []
    pos = 1
    while s[pos] == "I":
        slots = s[pos + 1:pos + 1 + t.n]
        perm1 = Perm5.parse(s[pos + 1 + t.n:pos + 6 + t.n])
        perm0 = Perm5.parse(s[pos + 6 + t.n:pos + block])
        instrs.append(Instruction(slots.index("m") + 1, perm1, perm0))
        pos += block
    accept_block = s[pos + 1:pos + 6]
    if accept_block.count("a") != 1 or accept_block[0] == "a":
        raise AdviceGrammarError(
            "accept block must mark exactly one state other than 1", pos + 1
        )
    accept = accept_block.index("a") + 1
    target = next(c for c in FIVE_CYCLES if c(1) == accept)
    return PermProgram(t.n, tuple(instrs), target)


def load_advice(path, n: int | None = None) -> AdviceTape:
    with open(path, encoding="ascii") as fh:
        return AdviceTape.parse(fh.read(), n)


def save_advice(tape: AdviceTape, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(tape.symbols)


# -- the machine --------------------------------------------------------------

class Tape:
    """Read-only tape with one head; counts every head move.

    There is deliberately no write operation.
    """

    def __init__(self, cells):
        self._cells = tuple(cells)
        self.pos = 0
        self.moves_left = 0
        self.moves_right = 0

    def read(self) -> str:
        if 0 <= self.pos < len(self._cells):
            return self._cells[self.pos]
        raise IndexError(f"head at {self.pos} is off the tape")

    def left(self) -> None:
        self.pos -= 1
        self.moves_left += 1

    def right(self) -> None:
        self.pos += 1
        self.moves_right += 1


class Control(Enum):
    START = "start"
    DISPATCH = "dispatch"        # expecting I or A
    REWIND = "rewind"            # input head travelling back to the left marker
    SLOTS_BEFORE_MARK = "slots"  # var slots, marked slot not seen yet
    SLOTS_AFTER_MARK = "slots*"  # var slots after the mark, input head still in lockstep
    CHECK_END = "check_end"      # input head must now sit on the right marker
    P1_SEEK = "p1_seek"          # b=1: capture digit at position s
    P1_SKIP = "p1_skip"          # skip rest of perm1
    P0_SEEK = "p0_seek"          # b=0: capture digit at position s
    P0_SKIP = "p0_skip"          # skip rest of perm0
    ACCEPT_SEEK = "accept_seek"
    ACCEPT_YES = "accept_yes"    # remaining accept slots, verdict accept
    ACCEPT_NO = "accept_no"      # remaining accept slots, verdict reject
    HALT_ACCEPT = "halt_accept"
    HALT_REJECT = "halt_reject"


REGISTER_BOUND = len(Control) * 5 * 2 * 5


@dataclass
class TraceStats:
    advice_head_moves_left: int = 0
    input_head_moves: int = 0
    steps: int = 0
    register_witness: set = field(default_factory=set)
    advice_monotone: bool = True

    def as_lines(self) -> list[str]:
        return [
            f"advice_head_moves_left={self.advice_head_moves_left}",
            f"input_head_moves={self.input_head_moves}",
            f"steps={self.steps}",
            f"register_witness={len(self.register_witness)}",
            f"register_bound={REGISTER_BOUND}",
            f"advice_monotone={int(self.advice_monotone)}",
        ]


class AdviceMachine:
    """The constant-space interpreter over raw advice symbols.

    ``run`` returns the accept bit.  The only fields that change during the
    run besides the two head positions are ``state``, ``s``, ``b`` and ``c``;
    each step records their snapshot in ``stats.register_witness``.
    """

    def __init__(self, advice_symbols, x):
        self.advice = Tape(advice_symbols)
        self.input = Tape([LEFT_END] + ["1" if v else "0" for v in x] + [RIGHT_END])
        self.state = Control.START
        self.s = 1
        self.b = 0
        self.c = 1
        self.stats = TraceStats()

    def _fail(self, message):
        raise AdviceGrammarError(message, self.advice.pos)

    def _advance(self):
        self.advice.right()

    def step(self) -> None:
        st = self.state
        adv = self.advice
        inp = self.input
        before = adv.pos
        try:
            sym = adv.read()
        except IndexError:
            self._fail("tape ended before E")

        if st is Control.START:
            if sym != "B":
                self._fail("tape must start with B")
            self._advance()
            self.state = Control.DISPATCH
        elif st is Control.DISPATCH:
            if sym == "I":
                self.state = Control.REWIND
                self._advance()
            elif sym == "A":
                self.c = 1
                self.state = Control.ACCEPT_SEEK
                self._advance()
            else:
                self._fail(f"expected I or A, found {sym!r}")
        elif st is Control.REWIND:
            if inp.read() == LEFT_END:
                self.state = Control.SLOTS_BEFORE_MARK
            else:
                inp.left()
        elif st in (Control.SLOTS_BEFORE_MARK, Control.SLOTS_AFTER_MARK):
            if sym in "um":
                inp.right()
                cell = inp.read()
                if cell == RIGHT_END:
                    raise InputLengthMismatch("variable block is longer than the input")
                if sym == "m":
                    if st is Control.SLOTS_AFTER_MARK:
                        self._fail("second marked slot in a variable block")
                    self.b = 1 if cell == "1" else 0
                    self.state = Control.SLOTS_AFTER_MARK
                self._advance()
            elif st is Control.SLOTS_BEFORE_MARK:
                self._fail("variable block without a marked slot")
            else:
                self.state = Control.CHECK_END
        elif st is Control.CHECK_END:
            inp.right()
            if inp.read() != RIGHT_END:
                raise InputLengthMismatch("variable block is shorter than the input")
            self.c = 1
            self.state = Control.P1_SEEK if self.b else Control.P1_SKIP
        elif st in (Control.P1_SEEK, Control.P1_SKIP, Control.P0_SEEK, Control.P0_SKIP):
            if sym not in "12345":
                self._fail(f"expected a permutation digit, found {sym!r}")
            if st in (Control.P1_SEEK, Control.P0_SEEK) and self.c == self.s:
                self.s = int(sym)
                st = Control.P1_SKIP if st is Control.P1_SEEK else Control.P0_SKIP
            self._advance()
            if self.c == 5:
                self.c = 1
                if st in (Control.P1_SEEK, Control.P1_SKIP):
                    # perm1 finished; perm0 matters only when nothing was captured
                    st = Control.P0_SEEK if not self.b else Control.P0_SKIP
                else:
                    st = Control.DISPATCH
            else:
                self.c += 1
            self.state = st
        elif st in (Control.ACCEPT_SEEK, Control.ACCEPT_YES, Control.ACCEPT_NO):
            if sym not in "ar":
                self._fail(f"expected an accept slot, found {sym!r}")
            if st is Control.ACCEPT_SEEK and self.c == self.s:
                st = Control.ACCEPT_YES if sym == "a" else Control.ACCEPT_NO
            self._advance()
            if self.c == 5:
                self.c = 1
                st = Control.HALT_ACCEPT if st is Control.ACCEPT_YES else Control.HALT_REJECT
                try:
                    end = adv.read()
                except IndexError:
                    end = None
                if end != "E":
                    self._fail("expected E after the accept block")
            else:
                self.c += 1
            self.state = st
        else:
            raise RuntimeError("step() called on a halted machine")

        if adv.pos < before:
            self.stats.advice_monotone = False
        self.stats.steps += 1
        self.stats.register_witness.add((self.state, self.s, self.b, self.c))

    def run(self) -> int:
        while self.state not in (Control.HALT_ACCEPT, Control.HALT_REJECT):
            self.step()
        self.stats.advice_head_moves_left = self.advice.moves_left
        self.stats.input_head_moves = self.input.moves_left + self.input.moves_right
        return 1 if self.state is Control.HALT_ACCEPT else 0


_CONTROL_BY_CODE = tuple(Control)
assert len(_CONTROL_BY_CODE) == kernels.TM_STATES


def _unpack_snapshot(code: int):
    code, c = divmod(code, 5)
    code, b = divmod(code, 2)
    state, s = divmod(code, 5)
    return (_CONTROL_BY_CODE[state], s + 1, b, c + 1)


def run_tm(t: AdviceTape, x, engine: str = "kernel") -> tuple[int, TraceStats]:
    """Run the machine on ``x``; returns (accept bit, stats).

    ``engine="kernel"`` uses the fast loop from the kernel backend, which
    implements the same transition function as :class:`AdviceMachine` on
    integer state codes.  If it reports a violation, the reference machine
    is re-run to raise the precise error.  ``engine="reference"`` always
    steps :class:`AdviceMachine`.
    """
    if len(x) != t.n:
        raise InputLengthMismatch(f"input has length {len(x)}, advice was built for n={t.n}")
    if engine == "kernel":
        return _run_kernel(t.symbols, x)
    if engine != "reference":
        raise ValueError(f"unknown engine {engine!r}")
    machine = AdviceMachine(t.symbols, x)
    bit = machine.run()
    return bit, machine.stats


def _run_kernel(symbols: str, x) -> tuple[int, TraceStats]:
    inp = (LEFT_END + "".join("1" if v else "0" for v in x) + RIGHT_END).encode("ascii")
    status, bit, al, _ar, il, ir, steps, witness, mono = kernels.tm_run(
        symbols.encode("ascii"), inp
    )
    if status != kernels.TM_OK:
        machine = AdviceMachine(symbols, x)
        machine.run()
        raise AssertionError("kernel reported an error the reference machine did not")
    stats = TraceStats(
        advice_head_moves_left=al,
        input_head_moves=il + ir,
        steps=steps,
        register_witness={_unpack_snapshot(code) for code in witness},
        advice_monotone=bool(mono),
    )
    return bit, stats
