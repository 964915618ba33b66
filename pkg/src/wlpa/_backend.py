"""Kernel selection.

``WLPA_BACKEND=python`` forces the pure-Python kernels, ``compiled`` makes a
missing extension an import error, anything else (default ``auto``) prefers
the compiled one.
"""

import os

from . import _pykernels

_choice = os.environ.get("WLPA_BACKEND", "auto").strip().lower()

if _choice == "python":
    kernels = _pykernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        if _choice == "compiled":
            raise
        kernels = _pykernels

NAME = "compiled" if kernels is not _pykernels else "python"


def get(name=None):
    """Return a kernel module by name (``"compiled"``/``"python"``) or the active one."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def compiled_available():
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True


def default_threads():
    """Thread count from ``WLPA_THREADS``, else 1."""
    raw = os.environ.get("WLPA_THREADS")
    if not raw:
        return 1
    value = int(raw)
    if value < 1:
        raise ValueError(f"WLPA_THREADS must be >= 1, got {raw!r}")
    return value
