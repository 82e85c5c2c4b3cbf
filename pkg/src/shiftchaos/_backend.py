"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting
SHIFTCHAOS_PURE=1 forces the pure-Python kernels.  Both backends return
bit-identical results, so the choice only affects speed.
"""

import os

if os.environ.get("SHIFTCHAOS_PURE"):
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

        BACKEND = "python"


def backend_name() -> str:
    """Name of the kernel backend in use: ``cython`` or ``python``."""
    return BACKEND
