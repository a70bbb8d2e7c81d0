"""Exact decompositions of the basic gates into the elementary library.

Every decomposition acts on canonical qudits ``0..n-1`` (controls first, target
last) and is checked against the gate matrix when it is built.  Phases are
tracked exactly, so ``global_phase`` is an exact angle rather than a fit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import (ELEMENTARY_KINDS, Circuit, CircuitError, ExactAngle, GateSpec, Kind,
                   QuditSystem)
from .gates import gate_matrix, phase

SYNTH_TOL = 1e-10


def _t(a) -> Fraction:
    return a.turns if isinstance(a, ExactAngle) else Fraction(a)


@dataclass(frozen=True)
class Decomposition:
    target: GateSpec
    sequence: tuple[GateSpec, ...]
    global_phase: ExactAngle

    def unitary(self, d: int) -> np.ndarray:
        from .sim import circuit_unitary
        n = len(self.target.qudits)
        u = circuit_unitary(Circuit(QuditSystem(d, n), self.sequence))
        return u * phase(self.global_phase)

    def error(self, d: int) -> float:
        return float(np.max(np.abs(self.unitary(d) - gate_matrix(self.target, d))))

    def verify(self, d: int, tol: float = SYNTH_TOL) -> "Decomposition":
        bad = [g.kind.value for g in self.sequence if g.kind not in ELEMENTARY_KINDS]
        if bad:
            raise CircuitError(f"non-elementary gates {sorted(set(bad))} in decomposition")
        err = self.error(d)
        if err > tol:
            raise CircuitError(f"decomposition of {self.target.kind.value} off by {err:.3e} (d={d})")
        return self

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for g in self.sequence:
            out[g.kind.value] = out.get(g.kind.value, 0) + 1
        return out

    @property
    def n_phase(self) -> int:
        return sum(g.kind == Kind.PH for g in self.sequence)

    @property
    def n_elementary(self) -> int:
        """Elementary gates excluding the single-level phase gates."""
        return len(self.sequence) - self.n_phase


def _rz(q: int, l: int, a) -> GateSpec:
    return GateSpec(Kind.RZ, (q,), (0, l), angles=(ExactAngle.from_turns(_t(a), 2),))


def _gcx(c: int, t: int, m: int, l: int) -> GateSpec:
    return GateSpec(Kind.GCX, (c, t), (0, l), controls=(m,))


def _gccx(c1: int, c2: int, t: int, m: int, n: int, j: int, k: int) -> GateSpec:
    return GateSpec(Kind.GCCX, (c1, c2, t), (j, k), controls=(m, n))


def _ph(q: int, m: int, a) -> GateSpec:
    return GateSpec(Kind.PH, (q,), controls=(m,), angles=(_t(a),))


def _angles(d: int, angles: Sequence) -> tuple[Fraction, ...]:
    a = tuple(_t(x) for x in angles)
    if len(a) != d - 1:
        raise CircuitError(f"expected {d - 1} angles for d={d}, got {len(a)}")
    return a


def _to_prime(block: Sequence[Fraction]) -> tuple[tuple[Fraction, ...], Fraction]:
    """Write ``diag(e^{i psi_v})`` as ``e^{i p} diag(e^{-i sum a}, e^{i a_1}, ...)``."""
    p = sum(block, Fraction(0)) / len(block)
    return tuple(x - p for x in block[1:]), p


def _check_value(d: int, *values: int) -> None:
    for v in values:
        if not 0 <= v < d:
            raise CircuitError(f"control value {v} out of range for d={d}")


def _dprime_chain(q: int, a: Sequence[Fraction]) -> list[GateSpec]:
    # R_z^(0l)(theta) puts -theta/2 on level 0 and +theta/2 on level l
    return [_rz(q, l, 2 * x) for l, x in enumerate(a, start=1)]


@lru_cache(maxsize=None)
def _synth_dprime(d: int, a: tuple[Fraction, ...]) -> Decomposition:
    target = GateSpec(Kind.DP, (0,), angles=a)
    return Decomposition(target, tuple(_dprime_chain(0, a)), ExactAngle(0)).verify(d)


def synth_dprime(d: int, angles: Sequence) -> Decomposition:
    """``diag(e^{-i sum a}, e^{i a_1}, ..., e^{i a_{d-1}})`` as a chain of ``d-1`` z-rotations."""
    return _synth_dprime(d, _angles(d, angles))


@lru_cache(maxsize=None)
def _synth_d(d: int, phis: tuple[Fraction, ...]) -> Decomposition:
    a, p = _to_prime((Fraction(0),) + phis)
    target = GateSpec(Kind.D, (0,), angles=phis)
    return Decomposition(target, tuple(_dprime_chain(0, a)), ExactAngle.from_turns(p)).verify(d)


def synth_d(d: int, phis: Sequence) -> Decomposition:
    return _synth_d(d, _angles(d, phis))


def _cd_cells(c: int, t: int, m: int, a: Sequence[Fraction], block_phase: Fraction) -> list[GateSpec]:
    seq: list[GateSpec] = []
    for l, x in enumerate(a, start=1):
        # with the control at m the two rotations add up to R_z(2x); otherwise they cancel
        seq += [_rz(t, l, x), _gcx(c, t, m, l), _rz(t, l, -x), _gcx(c, t, m, l)]
    seq.append(_ph(c, m, block_phase))
    return seq


@lru_cache(maxsize=None)
def _synth_cd_prime(d: int, m: int, a: tuple[Fraction, ...], p: Fraction) -> Decomposition:
    _check_value(d, m)
    target = GateSpec(Kind.CDP, (0, 1), controls=(m,), angles=a + (p,))
    return Decomposition(target, tuple(_cd_cells(0, 1, m, a, p)), ExactAngle(0)).verify(d)


def synth_cd_prime(d: int, m: int, angles: Sequence, block_phase=0) -> Decomposition:
    """Controlled ``D'`` firing on control value ``m``: ``4(d-1)`` rotations/GCX plus one phase gate."""
    return _synth_cd_prime(d, m, _angles(d, angles), _t(block_phase))


@lru_cache(maxsize=None)
def _synth_cd(d: int, m: int, phis: tuple[Fraction, ...]) -> Decomposition:
    _check_value(d, m)
    a, p = _to_prime((Fraction(0),) + phis)
    target = GateSpec(Kind.CD, (0, 1), controls=(m,), angles=phis)
    return Decomposition(target, tuple(_cd_cells(0, 1, m, a, p)), ExactAngle(0)).verify(d)


def synth_cd(d: int, m: int, phis: Sequence) -> Decomposition:
    return _synth_cd(d, m, _angles(d, phis))


def _unit(d: int, k: int, sign: int) -> Fraction:
    if k < 1:
        raise CircuitError(f"K must be >= 1, got {k}")
    if sign not in (1, -1):
        raise CircuitError(f"sign must be +1 or -1, got {sign}")
    return Fraction(sign, d ** k)


@lru_cache(maxsize=None)
def synth_rk(d: int, k: int, sign: int = 1) -> Decomposition:
    """``R_k`` (or its inverse for ``sign=-1``) as ``d-1`` controlled diagonals."""
    alpha = _unit(d, k, sign)
    seq: list[GateSpec] = []
    for m in range(1, d):
        phis = tuple(alpha * m * l for l in range(1, d))
        seq += _synth_cd(d, m, phis).sequence
    target = GateSpec(Kind.RK, (0, 1), angles=(alpha,), k=k)
    return Decomposition(target, tuple(seq), ExactAngle(0)).verify(d)


def _controlled_rz_cells(c: int, t: int, m: int, theta: Sequence[Fraction]) -> list[GateSpec]:
    """``R_z^(0l)(theta_l)`` on ``t`` for every level ``l``, applied iff control ``c`` is ``m``."""
    seq: list[GateSpec] = []
    for l, th in enumerate(theta, start=1):
        if th:
            seq += [_rz(t, l, th / 2), _gcx(c, t, m, l), _rz(t, l, -th / 2), _gcx(c, t, m, l)]
    return seq


def _doubly_controlled_rz_cells(c1: int, c2: int, t: int, m: int, n: int,
                                theta: Sequence[Fraction]) -> list[GateSpec]:
    """``R_z^(0l)(theta_l)`` on ``t`` applied iff ``c1 == m`` and ``c2 == n``.

    The four rotations carry signs (+, -, +, -) so that every control pattern
    other than both-firing cancels.
    """
    seq: list[GateSpec] = []
    for l, th in enumerate(theta, start=1):
        if not th:
            continue
        q = th / 4
        seq += [_rz(t, l, q), _gcx(c1, t, m, l), _rz(t, l, -q), _gcx(c2, t, n, l),
                _rz(t, l, q), _gcx(c1, t, m, l), _rz(t, l, -q), _gcx(c2, t, n, l)]
    return seq


def _ccz_level(d: int, m: int, n: int, k: int) -> list[GateSpec]:
    """Phase ``-1`` on ``|m, n, k>`` and identity elsewhere, over qudits (0, 1, 2)."""
    # target part: phase (1/2)([t=k] - 1/d) turns when both controls fire
    target_theta = [Fraction(int(l == k)) - Fraction(1, d) for l in range(1, d)]
    seq = _doubly_controlled_rz_cells(0, 1, 2, m, n, target_theta)
    # remaining 1/(2d) turns on (m, n): phase on c2 at level n when c1 == m, centred
    ctrl_theta = [(Fraction(int(l == n)) - Fraction(1, d)) / d for l in range(1, d)]
    seq += _controlled_rz_cells(0, 1, m, ctrl_theta)
    seq.append(_ph(0, m, Fraction(1, 2 * d * d)))
    return seq


@lru_cache(maxsize=None)
def synth_gccx(d: int, m: int, n: int, j: int, k: int) -> Decomposition:
    """Doubly controlled ``X^(jk)`` as ``H^(jk) . CCZ^(jk) . H^(jk)`` with the CCZ in rotations/GCX."""
    _check_value(d, m, n)
    target = GateSpec(Kind.GCCX, (0, 1, 2), (j, k), controls=(m, n))
    h = GateSpec(Kind.HJK, (2,), (j, k))
    seq = [h] + _ccz_level(d, m, n, k) + [h]
    return Decomposition(target, tuple(seq), ExactAngle(0)).verify(d)


def _ccd_cells(d: int, m: int, n: int, a: Sequence[Fraction], p: Fraction) -> list[GateSpec]:
    seq: list[GateSpec] = []
    for l, x in enumerate(a, start=1):
        g = synth_gccx(d, m, n, 0, l).sequence
        seq += [_rz(2, l, x), *g, _rz(2, l, -x), *g]
    # phase p on the control pair (m, n): a controlled diagonal from c1 onto c2
    ca, cp = _to_prime(tuple(p if v == n else Fraction(0) for v in range(d)))
    seq += _cd_cells(0, 1, m, ca, cp)
    return seq


@lru_cache(maxsize=None)
def _synth_ccd_prime(d: int, m: int, n: int, a: tuple[Fraction, ...], p: Fraction) -> Decomposition:
    _check_value(d, m, n)
    target = GateSpec(Kind.CCDP, (0, 1, 2), controls=(m, n), angles=a + (p,))
    return Decomposition(target, tuple(_ccd_cells(d, m, n, a, p)), ExactAngle(0)).verify(d)


def synth_ccd_prime(d: int, m: int, n: int, angles: Sequence, block_phase=0) -> Decomposition:
    return _synth_ccd_prime(d, m, n, _angles(d, angles), _t(block_phase))


@lru_cache(maxsize=None)
def _synth_ccd(d: int, m: int, n: int, phis: tuple[Fraction, ...]) -> Decomposition:
    _check_value(d, m, n)
    a, p = _to_prime((Fraction(0),) + phis)
    target = GateSpec(Kind.CCD, (0, 1, 2), controls=(m, n), angles=phis)
    return Decomposition(target, tuple(_ccd_cells(d, m, n, a, p)), ExactAngle(0)).verify(d)


def synth_ccd(d: int, m: int, n: int, phis: Sequence) -> Decomposition:
    return _synth_ccd(d, m, n, _angles(d, phis))


def rbar_blocks(d: int, k: int, sign: int = 1) -> list[tuple[int, int, tuple[Fraction, ...]]]:
    """The ``(m, n, phis)`` doubly controlled diagonals whose product is ``R-bar_k``."""
    alpha = _unit(d, k, sign)
    return [(m, n, tuple(alpha * m * n * l for l in range(1, d)))
            for m in range(1, d) for n in range(1, d)]


@lru_cache(maxsize=None)
def synth_rbark(d: int, k: int, sign: int = 1) -> Decomposition:
    seq: list[GateSpec] = []
    for m, n, phis in rbar_blocks(d, k, sign):
        seq += _synth_ccd(d, m, n, phis).sequence
    target = GateSpec(Kind.RBAR, (0, 1, 2), angles=(_unit(d, k, sign),), k=k)
    return Decomposition(target, tuple(seq), ExactAngle(0)).verify(d)



def decompose(g: GateSpec, d: int) -> Decomposition:
    """Elementary decomposition of ``g`` on canonical qudits ``0..n-1``."""
    g.validate(d)
    kind, a = g.kind, tuple(x.turns for x in g.angles)
    if kind in ELEMENTARY_KINDS:
        return Decomposition(g.on(*range(len(g.qudits))), (g.on(*range(len(g.qudits))),), ExactAngle(0))
    if kind == Kind.D:
        return _synth_d(d, a)
    if kind == Kind.DP:
        return _synth_dprime(d, a)
    if kind == Kind.CD:
        return _synth_cd(d, g.controls[0], a)
    if kind == Kind.CDP:
        return _synth_cd_prime(d, g.controls[0], a[:-1], a[-1])
    if kind == Kind.CCD:
        return _synth_ccd(d, *g.controls, a)
    if kind == Kind.CCDP:
        return _synth_ccd_prime(d, *g.controls, a[:-1], a[-1])
    if kind == Kind.RK:
        return synth_rk(d, g.k, 1 if a[0] == Fraction(1, d ** g.k) else -1)
    if kind == Kind.RBAR:
        return synth_rbark(d, g.k, 1 if a[0] == Fraction(1, d ** g.k) else -1)
    if kind == Kind.GCCX:
        return synth_gccx(d, *g.controls, *g.levels)
    raise CircuitError(f"no decomposition for {kind.value}")


def expand_gate(g: GateSpec, d: int) -> tuple[list[GateSpec], Fraction]:
    """Elementary gates for ``g`` on its own qudits, and the dropped global phase in turns."""
    if g.kind in ELEMENTARY_KINDS:
        return [g], Fraction(0)
    dec = decompose(g, d)
    out = [h.on(*(g.qudits[i] for i in h.qudits)) for h in dec.sequence]
    if g.tag:
        out = [GateSpec(h.kind, h.qudits, h.levels, h.controls, h.angles, h.k, g.tag) for h in out]
    return out, dec.global_phase.turns


def expand_circuit(c: Circuit) -> tuple[Circuit, Fraction]:
    """Fully elementary circuit equal to ``c`` up to the returned global phase (turns)."""
    gates: list[GateSpec] = []
    total = Fraction(0)
    for g in c.gates:
        seq, p = expand_gate(g, c.system.d)
        gates += seq
        total += p
    return c.with_gates(gates), total % 1
