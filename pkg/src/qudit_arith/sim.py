"""Dense state-vector simulation and unitary extraction."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .core import Circuit, CircuitError, GateSpec, QuditSystem
from .gates import gate_diagonal, gate_matrix

NORM_TOL = 1e-9
UNITARY_CAP = 2187


@dataclass
class StateVector:
    system: QuditSystem
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.system.dim,):
            raise CircuitError(f"expected {self.system.dim} amplitudes, got shape {amps.shape}")
        self.amplitudes = amps

    @classmethod
    def basis(cls, system: QuditSystem, index: int) -> "StateVector":
        amps = np.zeros(system.dim, dtype=complex)
        amps[index] = 1.0
        return cls(system, amps)

    @classmethod
    def from_registers(cls, system: QuditSystem, values: dict[str, int]) -> "StateVector":
        return cls.basis(system, system.basis_index(values))

    @classmethod
    def random(cls, system: QuditSystem, rng: np.random.Generator) -> "StateVector":
        v = rng.normal(size=system.dim) + 1j * rng.normal(size=system.dim)
        return cls(system, v / np.linalg.norm(v))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.system, self.amplitudes.copy())


def apply_gate_batch(states: np.ndarray, d: int, w: int, g: GateSpec) -> None:
    """Apply ``g`` in place to every column of ``states`` (shape (d**w, B))."""
    if g.is_diagonal:
        kernels.apply_diag(states, d, w, g.qudits, gate_diagonal(g, d))
    else:
        kernels.apply_dense(states, d, w, g.qudits, gate_matrix(g, d))


def apply_gate(s: StateVector, g: GateSpec) -> StateVector:
    d, w = s.system.d, s.system.w
    g.validate(d, w)
    out = s.amplitudes.copy().reshape(-1, 1)
    apply_gate_batch(out, d, w, g)
    result = StateVector(s.system, out[:, 0])
    drift = abs(result.norm() - s.norm())
    if drift > NORM_TOL:
        raise CircuitError(f"norm drift {drift:.3e} after {g.kind.value} on {g.qudits}")
    return result


def run_batch(c: Circuit, states: np.ndarray, validate: bool = True) -> np.ndarray:
    """Run ``c`` on each column of ``states``; returns a new array."""
    d, w = c.system.d, c.system.w
    if validate:
        c.validate()
    out = np.array(states, dtype=complex, order="C", copy=True)
    if out.ndim == 1:
        out = out.reshape(-1, 1)
    if out.shape[0] != c.system.dim:
        raise CircuitError(f"state dimension {out.shape[0]} does not match system dimension {c.system.dim}")
    norms = np.linalg.norm(out, axis=0)
    for g in c.gates:
        apply_gate_batch(out, d, w, g)
    drift = np.max(np.abs(np.linalg.norm(out, axis=0) - norms)) if out.shape[1] else 0.0
    if drift > NORM_TOL:
        raise CircuitError(f"norm drift {drift:.3e} over circuit {c.label!r}")
    return out


def run_circuit(s: StateVector, c: Circuit) -> StateVector:
    if s.system != c.system:
        raise CircuitError("state and circuit are over different qudit systems")
    return StateVector(s.system, run_batch(c, s.amplitudes)[:, 0])


def iter_basis_columns(c: Circuit, chunk: int = 729, indices: Iterable[int] | None = None):
    """Yield ``(indices, outputs)`` for basis inputs, ``chunk`` columns at a time."""
    dim = c.system.dim
    idx = np.arange(dim) if indices is None else np.fromiter(indices, dtype=np.intp)
    c.validate()
    for start in range(0, len(idx), chunk):
        part = idx[start:start + chunk]
        block = np.zeros((dim, len(part)), dtype=complex)
        block[part, np.arange(len(part))] = 1.0
        yield part, run_batch(c, block, validate=False)


def circuit_unitary(c: Circuit, cap: int = UNITARY_CAP) -> np.ndarray:
    if c.system.dim > cap:
        raise CircuitError(f"d^w = {c.system.dim} exceeds the unitary cap {cap}")
    return run_batch(c, np.eye(c.system.dim, dtype=complex))


def is_identity_circuit(c: Circuit, tol: float = 1e-10, chunk: int = 729) -> tuple[bool, float]:
    """Check that ``c`` acts as the identity up to one global phase, column by column.

    Returns ``(ok, worst max-entry deviation)``; needs no full unitary in memory.
    """
    ref = None
    worst = 0.0
    for part, out in iter_basis_columns(c, chunk):
        if ref is None:
            ref = out[part[0], 0]
            ref = ref / abs(ref) if abs(ref) > 0.5 else 1.0
        expected = np.zeros_like(out)
        expected[part, np.arange(len(part))] = ref
        worst = max(worst, float(np.max(np.abs(out - expected))))
    return worst <= tol, worst


def global_phase_between(u: np.ndarray, v: np.ndarray) -> float:
    """Phase ``phi`` (radians) making ``e^{i phi} v`` closest to ``u``."""
    t = np.vdot(v, u)  # tr(V^dagger U)
    if abs(t) < 1e-12:
        i = np.unravel_index(np.argmax(np.abs(v)), v.shape)
        t = u[i] / v[i] if abs(v[i]) > 0 else 1.0
    return float(np.angle(t))


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-10) -> tuple[bool, float]:
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise CircuitError(f"shape mismatch {u.shape} vs {v.shape}")
    phi = global_phase_between(u, v)
    err = float(np.max(np.abs(u - np.exp(1j * phi) * v))) if u.size else 0.0
    return err <= tol, phi


def reduced_purity(s: StateVector, register: str) -> float:
    """``Tr(rho^2)`` of the reduced state on one register."""
    sysm = s.system
    r = sysm.register(register)
    psi = s.amplitudes.reshape((sysm.d,) * sysm.w)
    keep = list(r)
    rest = [i for i in range(sysm.w) if i not in r]
    m = np.transpose(psi, keep + rest).reshape(sysm.d ** len(keep), -1)
    rho = m @ m.conj().T
    return float(np.real(np.vdot(rho, rho)))


def register_probability(s: StateVector, register: str, value: int) -> float:
    """Probability that measuring ``register`` yields ``value``."""
    sysm = s.system
    r = sysm.register(register)
    psi = s.amplitudes.reshape((sysm.d,) * sysm.w)
    digits = []
    for _ in r:
        digits.append(value % sysm.d)
        value //= sysm.d
    index = [slice(None)] * sysm.w
    for pos, digit in zip(r, reversed(digits)):
        index[pos] = digit
    return float(np.sum(np.abs(psi[tuple(index)]) ** 2))
