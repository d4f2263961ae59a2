"""Circuits, width-5 permutation programs, advice tapes and table-driven sorting."""

from .kernels import BACKEND
from .perm5 import Perm5, IDENTITY, compose, inverse, conjugate, commutator
from .circuit import Circuit, parse_circuit, format_circuit, eval_circuit, depth
from .bp import (
    GeneralBP,
    Instruction,
    PermProgram,
    eval_general_bp,
    eval_perm_bp,
    perm_to_general,
    yield_perm,
)
from .barrington import DEFAULT_TARGET, compile_circuit, compile_plan
from .parallelize import bp_to_circuit
from .advice import AdviceTape, encode_advice, decode_advice, run_tm
from .advice_sort import SortParams, SortTable, advice_merge_sort, build_table, reference_merge_sort
from .equiv import equiv_exhaustive, gen_corpus

__version__ = "0.1.0"
