"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise the
numpy implementation in ``_kernels_py``.  Setting ``ELLIPOT_PURE_PYTHON=1``
forces the fallback.
"""

from __future__ import annotations

import importlib
import os

from . import _kernels_py

_FORCE_PY = os.environ.get("ELLIPOT_PURE_PYTHON", "").strip().lower() in ("1", "true", "yes")


def load(name: str):
    """Return the kernel module ``"cython"`` or ``"python"``."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module("ellipot._kernels")
    raise ValueError(f"unknown backend {name!r}")


def available() -> list[str]:
    names = ["python"]
    try:
        load("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if _FORCE_PY:
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        kernels = load("cython")
        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

MODE_POTENTIAL = _kernels_py.MODE_POTENTIAL
MODE_AXIS = _kernels_py.MODE_AXIS
STATUS_OK = _kernels_py.STATUS_OK
STATUS_NOT_EXTERIOR = _kernels_py.STATUS_NOT_EXTERIOR
STATUS_NO_CONVERGENCE = _kernels_py.STATUS_NO_CONVERGENCE
