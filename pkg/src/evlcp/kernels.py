"""Kernel backend chosen at import time.

The compiled ``_kernels`` extension is used when it was built; otherwise,
or when ``EVLCP_PURE_PYTHON`` is set to a non-empty value, the numpy
implementation in ``_kernels_py`` is used.  ``BACKEND`` names the choice.
"""
import os

from . import _kernels_py

if os.environ.get("EVLCP_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

vertex_scan = _impl.vertex_scan
enumerate_scan = _impl.enumerate_scan
alpha_scan = _impl.alpha_scan


def compiled():
    """The compiled module, or None if it is not available."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
