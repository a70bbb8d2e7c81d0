"""NumPy implementation of the gate-application kernels (fallback backend)."""
from __future__ import annotations

import numpy as np


def apply_dense(state: np.ndarray, d: int, w: int, targets, u: np.ndarray) -> None:
    targets = [int(t) for t in targets]
    k = len(targets)
    n_cols = state.shape[1]
    psi = state.reshape((d,) * w + (n_cols,))
    ut = np.asarray(u).reshape((d,) * (2 * k))
    res = np.tensordot(ut, psi, axes=(list(range(k, 2 * k)), targets))
    res = np.moveaxis(res, list(range(k)), targets)
    state[...] = res.reshape(state.shape)


def apply_diag(state: np.ndarray, d: int, w: int, targets, diag: np.ndarray) -> None:
    targets = [int(t) for t in targets]
    k = len(targets)
    order = np.argsort(targets)
    dt = np.asarray(diag).reshape((d,) * k).transpose(order)
    shape = [1] * (w + 1)
    for t in targets:
        shape[t] = d
    psi = state.reshape((d,) * w + (state.shape[1],))
    psi *= dt.reshape(shape)
