"""Explicit unitary matrices for every gate family.

Multi-qudit matrices use the ordering (controls..., target), the first qudit
being the most significant index.  Matrices are returned exactly as defined,
global phases included.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import CircuitError, ExactAngle, GateSpec, Kind

# A DenseUnitary is a complex128 ndarray of shape (dim, dim).
DenseUnitary = np.ndarray

UNITARITY_TOL = 1e-12


def _turns(a) -> Fraction:
    if isinstance(a, ExactAngle):
        return a.turns
    return Fraction(a)


def phase(t) -> complex:
    """``exp(2*pi*i*t)`` for an exact number of turns ``t``."""
    t = _turns(t) % 1
    if t == 0:
        return 1.0 + 0j
    if t == Fraction(1, 2):
        return -1.0 + 0j
    if t == Fraction(1, 4):
        return 1j
    if t == Fraction(3, 4):
        return -1j
    return complex(np.exp(2j * np.pi * float(t)))


def _check_levels(d: int, j: int, k: int) -> None:
    if not 0 <= j < k < d:
        raise CircuitError(f"need 0 <= j < k < d, got j={j} k={k} d={d}")


def _check_value(d: int, *values: int) -> None:
    for v in values:
        if not 0 <= v < d:
            raise CircuitError(f"basis value {v} out of range for d={d}")


def is_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def embed_2x2(d: int, j: int, k: int, v: np.ndarray) -> np.ndarray:
    _check_levels(d, j, k)
    u = np.eye(d, dtype=complex)
    u[j, j], u[j, k] = v[0, 0], v[0, 1]
    u[k, j], u[k, k] = v[1, 0], v[1, 1]
    return u


def build_x_jk(d: int, j: int, k: int) -> DenseUnitary:
    _check_levels(d, j, k)
    u = np.eye(d, dtype=complex)
    u[[j, k]] = u[[k, j]]
    return u


def rotation_2x2(axis: str, theta) -> np.ndarray:
    t = np.pi * float(_turns(theta))  # theta / 2 in radians
    c, s = np.cos(t), np.sin(t)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "z":
        half = _turns(theta) / 2
        return np.array([[phase(-half), 0], [0, phase(half)]])
    raise CircuitError(f"unknown rotation axis {axis!r}")


def build_rot_jk(d: int, axis: str, j: int, k: int, theta) -> DenseUnitary:
    """``exp(-i theta sigma_axis^(jk) / 2)``; ``theta`` in turns or an ExactAngle."""
    return embed_2x2(d, j, k, rotation_2x2(axis, theta))


def build_gcx(d: int, m: int, j: int, k: int) -> DenseUnitary:
    _check_value(d, m)
    blocks = [np.eye(d, dtype=complex) for _ in range(d)]
    blocks[m] = build_x_jk(d, j, k)
    return _block_diag(blocks)


def build_hadamard_d(d: int, conjugate: bool = False) -> DenseUnitary:
    if d < 2:
        raise CircuitError("Hadamard needs d >= 2")
    r = np.arange(d)
    h = np.array([[phase(Fraction(int(a * b) % d, d)) for b in r] for a in r]) / np.sqrt(d)
    return h.conj() if conjugate else h


def _block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    pos = 0
    for b in blocks:
        s = b.shape[0]
        out[pos:pos + s, pos:pos + s] = b
        pos += s
    return out


def _diag(turns_list: Sequence) -> np.ndarray:
    return np.diag([phase(t) for t in turns_list])


def dprime_phases(angles: Sequence, block_phase=0) -> list[Fraction]:
    """Diagonal (in turns) of ``e^{i phi} diag(e^{-i sum a}, e^{i a_1}, ...)``."""
    a = [_turns(x) for x in angles]
    p = _turns(block_phase)
    return [p - sum(a)] + [p + x for x in a]


def d_phases(angles: Sequence) -> list[Fraction]:
    return [Fraction(0)] + [_turns(x) for x in angles]


def build_diag_family(variant: str, d: int, *params) -> DenseUnitary:
    """Single-qudit diagonal gates.

    ``D``: params = (phi_1..phi_{d-1}); ``Dprime``: (a_1..a_{d-1}[, phase]);
    ``Phi``: (k[, power]); ``S``: (m, phi); ``DQ``: (q, m[, dagger=True]) gives
    ``diag(omega^{-+ v d^m})`` with ``omega = e^{i 2 pi / d^q}``.
    """
    if variant == "D":
        (angles,) = params
        if len(angles) != d - 1:
            raise CircuitError(f"D needs {d - 1} angles, got {len(angles)}")
        return _diag(d_phases(angles))
    if variant == "Dprime":
        angles = params[0]
        if len(angles) != d - 1:
            raise CircuitError(f"D' needs {d - 1} angles, got {len(angles)}")
        return _diag(dprime_phases(angles, params[1] if len(params) > 1 else 0))
    if variant == "Phi":
        k = params[0]
        power = params[1] if len(params) > 1 else 1
        return _diag([Fraction(power * v, d ** k) for v in range(d)])
    if variant == "S":
        m, phi = params
        _check_value(d, m)
        return _diag([_turns(phi) if v == m else 0 for v in range(d)])
    if variant == "DQ":
        q, m = params[0], params[1]
        dagger = params[2] if len(params) > 2 else True
        sign = -1 if dagger else 1
        return _diag([Fraction(sign * v * d ** m, d ** q) for v in range(d)])
    raise CircuitError(f"unknown diagonal variant {variant!r}")


def build_controlled_family(variant: str, d: int, *params) -> DenseUnitary:
    """Block-diagonal controlled gates.

    ``CD``: (m, phis); ``CDprime``: (m, a[, phase]); ``Rk``: (k[, sign]);
    ``CCD``: (m, n, phis); ``CCDprime``: (m, n, a[, phase]); ``GCCX``: (m, n, j, k);
    ``Rbar``: (k[, sign]).
    """
    eye = np.eye(d, dtype=complex)
    if variant in ("CD", "CDprime"):
        m = params[0]
        _check_value(d, m)
        block = (build_diag_family("D", d, params[1]) if variant == "CD"
                 else build_diag_family("Dprime", d, *params[1:]))
        return _block_diag([block if c == m else eye for c in range(d)])
    if variant == "Rk":
        k = params[0]
        sign = params[1] if len(params) > 1 else 1
        return np.diag([phase(Fraction(sign * j * m, d ** k)) for j in range(d) for m in range(d)])
    if variant in ("CCD", "CCDprime"):
        m, n = params[0], params[1]
        _check_value(d, m, n)
        block = (build_diag_family("D", d, params[2]) if variant == "CCD"
                 else build_diag_family("Dprime", d, *params[2:]))
        return _block_diag([block if (a, b) == (m, n) else eye for a in range(d) for b in range(d)])
    if variant == "GCCX":
        m, n, j, k = params
        _check_value(d, m, n)
        x = build_x_jk(d, j, k)
        return _block_diag([x if (a, b) == (m, n) else eye for a in range(d) for b in range(d)])
    if variant == "Rbar":
        k = params[0]
        sign = params[1] if len(params) > 1 else 1
        return np.diag([phase(Fraction(sign * m * n * r, d ** k))
                        for m in range(d) for n in range(d) for r in range(d)])
    raise CircuitError(f"unknown controlled variant {variant!r}")


_T2 = {"S": Fraction(1, 4), "T": Fraction(1, 8)}


def build_two_level_gates(variant: str, d: int, j: int, k: int, dagger: bool = False) -> DenseUnitary:
    """``S^(jk)``, ``T^(jk)`` (phase on level k) and ``H^(jk)``."""
    _check_levels(d, j, k)
    if variant in _T2:
        t = -_T2[variant] if dagger else _T2[variant]
        return embed_2x2(d, j, k, np.diag([1, phase(t)]))
    if variant == "H":
        return embed_2x2(d, j, k, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    raise CircuitError(f"unknown two-level variant {variant!r}")


def swap_matrix(d: int) -> np.ndarray:
    u = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            u[b * d + a, a * d + b] = 1
    return u


def gate_phases(g: GateSpec, d: int) -> list[Fraction]:
    """Diagonal of a diagonal gate, in turns, over its qudits' joint basis."""
    kind, a = g.kind, g.angles
    if kind == Kind.RZ:
        j, k = g.levels
        half = a[0].turns / 2
        out = [Fraction(0)] * d
        out[j], out[k] = -half, half
        return out
    if kind in (Kind.TJK, Kind.TJKDG, Kind.SJK, Kind.SJKDG):
        base = _T2["T" if kind in (Kind.TJK, Kind.TJKDG) else "S"]
        out = [Fraction(0)] * d
        out[g.levels[1]] = -base if kind in (Kind.TJKDG, Kind.SJKDG) else base
        return out
    if kind == Kind.PH:
        return [a[0].turns if v == g.controls[0] else Fraction(0) for v in range(d)]
    if kind == Kind.D:
        return d_phases(a)
    if kind == Kind.DP:
        return dprime_phases(a)
    if kind in (Kind.CD, Kind.CDP):
        block = d_phases(a) if kind == Kind.CD else dprime_phases(a[:-1], a[-1])
        m = g.controls[0]
        return [block[t] if c == m else Fraction(0) for c in range(d) for t in range(d)]
    if kind in (Kind.CCD, Kind.CCDP):
        block = d_phases(a) if kind == Kind.CCD else dprime_phases(a[:-1], a[-1])
        m, n = g.controls
        return [block[t] if (c1, c2) == (m, n) else Fraction(0)
                for c1 in range(d) for c2 in range(d) for t in range(d)]
    if kind == Kind.RK:
        u = a[0].turns
        return [u * j * m for j in range(d) for m in range(d)]
    if kind == Kind.RBAR:
        u = a[0].turns
        return [u * m * n * r for m in range(d) for n in range(d) for r in range(d)]
    raise CircuitError(f"{kind.value} is not diagonal")


@lru_cache(maxsize=4096)
def gate_diagonal(g: GateSpec, d: int) -> np.ndarray:
    out = np.array([phase(t) for t in gate_phases(g, d)], dtype=complex)
    out.flags.writeable = False
    return out


def gate_matrix(g: GateSpec, d: int) -> DenseUnitary:
    """Matrix of ``g`` over its own qudits (ordering as in ``g.qudits``); read-only."""
    u = _gate_matrix(g, d)
    u.flags.writeable = False
    return u


@lru_cache(maxsize=4096)
def _gate_matrix(g: GateSpec, d: int) -> DenseUnitary:
    kind = g.kind
    if g.is_diagonal:
        return np.diag(gate_diagonal(g, d))
    if kind == Kind.H:
        return build_hadamard_d(d)
    if kind == Kind.HC:
        return build_hadamard_d(d, conjugate=True)
    if kind == Kind.X:
        return build_x_jk(d, *g.levels)
    if kind in (Kind.RX, Kind.RY):
        return build_rot_jk(d, kind.value[1].lower(), *g.levels, g.angles[0])
    if kind == Kind.HJK:
        return build_two_level_gates("H", d, *g.levels)
    if kind == Kind.GCX:
        return build_gcx(d, g.controls[0], *g.levels)
    if kind == Kind.GCCX:
        return build_controlled_family("GCCX", d, *g.controls, *g.levels)
    if kind in (Kind.SWAP, Kind.RELABEL):
        return swap_matrix(d)
    raise CircuitError(f"no matrix for gate kind {kind.value}")
