"""Backend selection for the batch kernels and the advice-machine loop.

The compiled extension is used when it was built; otherwise the pure-Python
module is.  Setting ``ADVICEBP_PURE=1`` forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("ADVICEBP_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

circuit_eval = _impl.circuit_eval
perm_yields = _impl.perm_yields
plan_yields = _impl.plan_yields
bp_eval = _impl.bp_eval
merge_pass = _impl.merge_pass
tm_run = _impl.tm_run

TM_OK = _pykernels.TM_OK
TM_STATES = _pykernels.TM_STATES

OP_EMPTY = _pykernels.OP_EMPTY
OP_LEAF = _pykernels.OP_LEAF
OP_CONCAT = _pykernels.OP_CONCAT
OP_CONJ = _pykernels.OP_CONJ
OP_INV = _pykernels.OP_INV
OP_RMUL = _pykernels.OP_RMUL


def backend_modules():
    """Every available implementation, keyed by name (for tests and benchmarks)."""
    mods = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        mods["cython"] = _ckernels
    return mods
