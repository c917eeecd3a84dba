"""Kernel selection.

The compiled module is used when it imports cleanly; set the environment
variable ``QFOLD_PURE_PYTHON=1`` to force the pure-Python fallback.  Both
implementations return identical results, which the test-suite checks.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("QFOLD_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels_c as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"

trim = _impl.trim
lp_add = _impl.lp_add
lp_mul = _impl.lp_mul
lp_axpy = _impl.lp_axpy
echelon_mod = _impl.echelon_mod


def backends():
    """Return the available kernel modules keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels_c
        out["cython"] = _kernels_c
    except ImportError:
        pass
    return out
