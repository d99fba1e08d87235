"""Kernel backend selection.

The compiled extension is used when it imports cleanly; setting the
environment variable ``COMPRESSIONS_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _fallback

if os.environ.get("COMPRESSIONS_PURE_PYTHON", "") not in ("", "0"):
    kernels = _fallback
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels
        BACKEND = "cython"
    except ImportError:  # extension not built
        kernels = _fallback
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
