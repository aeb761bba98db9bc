"""Kernel backend selection: compiled extension if available, else pure Python.

Set the environment variable ``ANISOROBIN_PURE=1`` to force the pure-Python
kernels (used by the benchmark and the backend-parity tests).
"""

import os

from . import _kernels_py

if os.environ.get("ANISOROBIN_PURE"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels_c as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py


def backend_name() -> str:
    """'cython' when the compiled extension is active, 'python' otherwise."""
    return kernels.BACKEND
