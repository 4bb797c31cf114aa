"""Kernel backend selection.

The compiled extension is used when importable; otherwise the NumPy
fallback.  Set RECTWAVE_FORCE_PYTHON=1 to skip the extension, or call
set_backend() to switch at runtime (used by the kernel benchmark).
"""

import os

from . import _kernels_np

_IMPLS = {"python": _kernels_np}
try:
    from . import _fastwt

    _IMPLS["cython"] = _fastwt
except ImportError:
    pass

if os.environ.get("RECTWAVE_FORCE_PYTHON"):
    BACKEND = "python"
else:
    BACKEND = "cython" if "cython" in _IMPLS else "python"

kernels = _IMPLS[BACKEND]


def available_backends():
    return tuple(sorted(_IMPLS))


def get_backend():
    return BACKEND


def set_backend(name):
    """Switch the active kernel implementation ('python' or 'cython')."""
    global BACKEND, kernels
    if name not in _IMPLS:
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    BACKEND = name
    kernels = _IMPLS[name]
