"""Reference constructions used by several test modules, independent of the simulator."""
from functools import lru_cache

import numpy as np

from qudit_arith.gates import gate_matrix


def embed(u, d, w, qudits):
    """Full ``d**w`` matrix of ``u`` acting on ``qudits`` (ordered as in ``u``)."""
    p = _permutation(d, w, tuple(qudits))
    full = np.kron(u, np.eye(d ** (w - len(qudits))))
    return p.T @ full @ p


@lru_cache(maxsize=None)
def _permutation(d, w, qudits):
    perm = list(qudits) + [q for q in range(w) if q not in qudits]
    p = np.zeros((d ** w, d ** w))
    for idx in range(d ** w):
        digits = np.unravel_index(idx, (d,) * w)
        p[np.ravel_multi_index([digits[q] for q in perm], (d,) * w), idx] = 1
    return p


def sequence_unitary(gates, d, w):
    u = np.eye(d ** w, dtype=complex)
    for g in gates:
        u = embed(gate_matrix(g, d), d, w, g.qudits) @ u
    return u


def phase_distance(u, v):
    """``min_phi max|u - e^{i phi} v|`` with the phase taken from the trace overlap."""
    t = np.vdot(v, u)
    return float(np.max(np.abs(u - np.exp(1j * np.angle(t)) * v)))


# criterion number -> list of (case, ok, detail), filled by the acceptance tests
ACCEPTANCE: dict = {}


def record(criterion, case, ok, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((case, bool(ok), detail))
    return ok
