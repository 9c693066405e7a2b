"""Hot-loop kernels with backend selection at import time.

The compiled extension is used when it is importable; otherwise the numpy
fallback serves the identical API. Set NOBLEMEANS_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the equivalence tests).
"""
import os

from . import pyfallback

_impl = pyfallback
BACKEND = "fallback"

if not os.environ.get("NOBLEMEANS_PURE_PYTHON"):
    try:
        from . import _native
    except ImportError:
        pass
    else:
        _impl = _native
        BACKEND = "native"

substitute = _impl.substitute
window_counts = _impl.window_counts
phase_sums = _impl.phase_sums


def backend() -> str:
    """Name of the active implementation: 'native' or 'fallback'."""
    return BACKEND
