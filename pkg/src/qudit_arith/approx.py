"""Approximating two-level rotations by words over a finite {H, T} library.

The search is exhaustive over canonical words (no ``HH``, at most seven ``T``
in a row) and meets in the middle: left halves are matched against right
halves through the SU(2) quaternion inner product.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import CircuitError, ExactAngle, GateSpec, Kind
from .gates import embed_2x2, rotation_2x2

MAX_SEARCH_LEN = 24
H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
T2 = np.diag([1, np.exp(1j * np.pi / 4)])
_LETTERS = {"H": H2, "T": T2}


def embed_two_level(d: int, j: int, k: int, v: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (2, 2) or np.max(np.abs(v.conj().T @ v - np.eye(2))) > tol:
        raise CircuitError("two-level block must be a 2x2 unitary")
    return embed_2x2(d, j, k, v)


def vz(theta) -> np.ndarray:
    return rotation_2x2("z", theta)


def vx(theta) -> np.ndarray:
    return rotation_2x2("x", theta)


def best_phase(a: np.ndarray, b: np.ndarray) -> float:
    """The ``phi`` (radians) minimising ``||a - e^{i phi} b||_2`` for 2x2 unitaries."""
    t = np.trace(b.conj().T @ a)
    return float(np.angle(t)) if abs(t) > 0 else 0.0


def distance(a: np.ndarray, b: np.ndarray) -> float:
    """``min_phi ||a - e^{i phi} b||_2`` for 2x2 unitaries."""
    return float(np.linalg.norm(a - np.exp(1j * best_phase(a, b)) * b, 2))


def word_matrix(word: str) -> np.ndarray:
    """Product of a word read in circuit order (first letter acts first)."""
    u = np.eye(2, dtype=complex)
    for ch in word:
        u = _LETTERS[ch] @ u
    return u


def reduce_word(word: str) -> str:
    """Cancel ``HH`` and fold ``T^8`` (a global phase) until the word is canonical."""
    out: list[str] = []
    for ch in word:
        if ch == "H" and out and out[-1] == "H":
            out.pop()
            continue
        out.append(ch)
        if ch == "T" and len(out) >= 8 and out[-8:] == ["T"] * 8:
            del out[-8:]
    return "".join(out)


@lru_cache(maxsize=None)
def canonical_words(max_len: int) -> tuple[str, ...]:
    """All canonical words of length ``<= max_len``, shortest first then lexicographic."""
    words = [""]
    frontier = [""]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            if not w.endswith("H"):
                nxt.append(w + "H")
            if not w.endswith("T" * 7):
                nxt.append(w + "T")
        nxt.sort()
        words += nxt
        frontier = nxt
    return tuple(words)


def _quaternion(u: np.ndarray) -> np.ndarray:
    """Real 4-vector of ``u / sqrt(det u)`` in the basis (I, iX, iY, iZ), sign-ambiguous."""
    s = u / np.sqrt(np.linalg.det(u))
    return np.array([(s[0, 0] + s[1, 1]).real / 2, (s[0, 1] + s[1, 0]).imag / 2,
                     (s[0, 1] - s[1, 0]).real / 2, (s[0, 0] - s[1, 1]).imag / 2])


@lru_cache(maxsize=None)
def _word_table(max_len: int) -> tuple[tuple[str, ...], np.ndarray, np.ndarray]:
    words = canonical_words(max_len)
    mats = np.array([word_matrix(w) for w in words])
    quats = np.array([_quaternion(m) for m in mats])
    return words, mats, quats


@dataclass(frozen=True)
class ApproxResult:
    word: str
    error: float
    phase: float  # radians; word ~ e^{-i phase} target, i.e. target ~ e^{i phase} word
    target: np.ndarray

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def t_count(self) -> int:
        return self.word.count("T")


def approx_unitary(target: np.ndarray, max_len: int, target_err: float = 0.0) -> ApproxResult:
    """Best canonical word of length ``<= max_len`` for a 2x2 unitary."""
    if max_len < 0 or max_len > MAX_SEARCH_LEN:
        raise CircuitError(f"max_len must lie in [0, {MAX_SEARCH_LEN}], got {max_len}")
    target = np.asarray(target, dtype=complex)
    right_len = max_len // 2
    left_len = max_len - right_len
    r_words, _, r_quat = _word_table(right_len)
    l_words, l_mats, _ = _word_table(left_len)
    # word = R then L (circuit order), product L @ R; |tr(V^dag L R)| = 2 |<q(L^dag V), q(R)>|
    lv = np.array([_quaternion(m.conj().T @ target) for m in l_mats])
    # 1 - |<q, q'>| = err^2 / 2, compared without the lossy square root
    gap = 1.0 - np.abs(lv @ r_quat.T)
    lens = np.add.outer(np.array([len(w) for w in l_words]), np.array([len(w) for w in r_words]))
    best = float(gap.min())
    goal = target_err ** 2 / 2
    if target_err > 0 and best <= goal:
        li, ri = np.nonzero(gap <= goal)
        keep = lens[li, ri] == lens[li, ri].min()
        li, ri = li[keep], ri[keep]
    else:
        li, ri = np.nonzero(gap <= best + 1e-13)
    candidates = sorted({reduce_word(r_words[r] + l_words[l]) for l, r in zip(li, ri)},
                        key=lambda w: (len(w), w))
    word = candidates[0]
    u = word_matrix(word)
    return ApproxResult(word, distance(target, u), best_phase(target, u), target)


def approx_vz(theta, max_len: int = 16, target_err: float = 0.0) -> ApproxResult:
    """Approximate ``diag(e^{-i theta/2}, e^{i theta/2})``; ``theta`` in turns or an ExactAngle."""
    t = theta.turns if isinstance(theta, ExactAngle) else Fraction(theta)
    return approx_unitary(vz(t), max_len, target_err)


@dataclass(frozen=True)
class RotationApprox:
    gates: tuple[GateSpec, ...]
    error: float
    phase: float  # relative phase on the (j, k) block: gate ~ U_[jk](e^{i phase} word)

    @property
    def length(self) -> int:
        return len(self.gates)


def approx_rot_gate(g: GateSpec, max_len: int = 16, target_err: float = 0.0) -> RotationApprox:
    """Replace an ``RZ``/``RX`` gate by ``HJK``/``T`` gates on the same subspace.

    For ``d > 2`` the block phase is not global, so the result also reports it.
    """
    if g.kind not in (Kind.RZ, Kind.RX):
        raise CircuitError(f"only RZ and RX gates can be approximated, got {g.kind.value}")
    j, k = g.levels
    theta = g.angles[0].turns
    res = approx_vz(theta, max_len, target_err)
    word = res.word if g.kind == Kind.RZ else reduce_word("H" + res.word + "H")
    if g.kind == Kind.RX:
        u = word_matrix(word)
        target = vx(theta)
        res = ApproxResult(word, distance(target, u), best_phase(target, u), target)
    letter = {"H": Kind.HJK, "T": Kind.TJK}
    gates = tuple(GateSpec(letter[ch], g.qudits, (j, k), tag=g.tag) for ch in word)
    return RotationApprox(gates, res.error, res.phase)


def error_curve(theta, lengths=(8, 12, 16, 20)) -> list[tuple[int, float, str]]:
    out = []
    for n in lengths:
        r = approx_vz(theta, n)
        out.append((n, r.error, r.word))
    return out


def library_size(d: int) -> int:
    if d < 2:
        raise CircuitError(f"d must be >= 2, got {d}")
    return (3 + d) * d * (d - 1) // 2 + 1


def discrete_library(d: int) -> list[GateSpec]:
    """One representative of every member of the constant gate library."""
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    gates = [GateSpec(Kind.H, (0,))]
    for kind in (Kind.HJK, Kind.TJK, Kind.SJK):
        gates += [GateSpec(kind, (0,), p) for p in pairs]
    gates += [GateSpec(Kind.GCX, (0, 1), p, controls=(m,)) for p in pairs for m in range(d)]
    return gates


def worst_case_angle(d: int, q: int) -> tuple[ExactAngle, float]:
    """Smallest rotation angle in a width-``q`` circuit and the matching precision (radians)."""
    a = ExactAngle(1, d ** q)
    return a, a.radians
