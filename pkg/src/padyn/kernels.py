"""Kernel backend selection.

The compiled extension is used when it imports cleanly; setting
``PADYN_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _pykernels

if os.environ.get("PADYN_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

INF_VAL = _pykernels.INF_VAL
ival = _impl.ival
ival_or_inf = _impl.ival_or_inf
series_mul = _impl.series_mul
min_val = _impl.min_val

__all__ = ["BACKEND", "INF_VAL", "ival", "ival_or_inf", "series_mul", "min_val"]
