"""Kernel backend selection: compiled extension when available, NumPy otherwise.

Set GRAPHYDRO_PURE_PYTHON=1 in the environment to force the fallback, or
call `use("numpy")`/`use("cython")` at runtime (tests and the benchmark do).
"""

import os

from . import _kernels_py

_BACKENDS = {"numpy": _kernels_py}

try:
    from . import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None
else:
    _BACKENDS["cython"] = _kernels_cy

if os.environ.get("GRAPHYDRO_PURE_PYTHON"):
    _active = _kernels_py
else:
    _active = _kernels_cy if _kernels_cy is not None else _kernels_py


def active():
    """Module providing the kernel functions currently in use."""
    return _active


def name() -> str:
    return _active.BACKEND_NAME


def available() -> tuple:
    """Backend names importable in this environment."""
    return tuple(sorted(_BACKENDS))


def use(backend: str):
    """Switch the active backend; returns the previously active name."""
    global _active
    if backend not in _BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; available: {available()}")
    previous = name()
    _active = _BACKENDS[backend]
    return previous
