"""Backend selection for the gate-application kernels.

The compiled extension is used when it imports; ``QUDIT_ARITH_KERNEL=numpy``
forces the NumPy fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"numpy": _kernels_py}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None and os.environ.get("QUDIT_ARITH_KERNEL") != "numpy" else "numpy"
_impl = _BACKENDS[BACKEND]


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def use_backend(name: str) -> None:
    global BACKEND, _impl
    if name not in _BACKENDS:
        raise ValueError(f"kernel backend {name!r} not available; have {available_backends()}")
    BACKEND, _impl = name, _BACKENDS[name]


def apply_dense(state: np.ndarray, d: int, w: int, targets, u: np.ndarray) -> None:
    """In-place ``state <- U`` on ``targets`` for every column of ``state`` (shape (d**w, B))."""
    _impl.apply_dense(state, d, w, np.asarray(targets, dtype=np.intp), np.ascontiguousarray(u, dtype=complex))


def apply_diag(state: np.ndarray, d: int, w: int, targets, diag: np.ndarray) -> None:
    _impl.apply_diag(state, d, w, np.asarray(targets, dtype=np.intp), np.ascontiguousarray(diag, dtype=complex))
