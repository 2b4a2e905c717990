"""Selects the row-reduction kernel at import time.

The compiled extension ``dgqs._rref`` is used when it was built and
``DGQS_PURE_PYTHON`` is unset; otherwise the pure-Python reference in
``dgqs._rref_py`` runs.  Both return identical results.
"""

import os

from . import _rref_py

BACKEND = "python"
_int = _rref_py.rref_int
_mod = _rref_py.rref_mod

if not os.environ.get("DGQS_PURE_PYTHON"):
    try:
        from . import _rref  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "compiled"
        _int = _rref.rref_int
        _mod = _rref.rref_mod

# the compiled F_p loop multiplies two residues in a C long long
_MOD_LIMIT = 1 << 31


def rref_int(rows):
    return _int(rows)


def rref_mod(rows, p):
    if p >= _MOD_LIMIT:
        return _rref_py.rref_mod(rows, p)
    return _mod(rows, p)
