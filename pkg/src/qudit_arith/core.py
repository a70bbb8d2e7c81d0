"""Circuit intermediate representation: register layout, exact angles and gates.

Angles are exact rationals measured in turns (one turn is 2*pi radians) and are
only converted to floating point inside the matrix constructors.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import pi
from typing import Iterable, Mapping, Sequence


class CircuitError(ValueError):
    """Raised when a gate or circuit fails validation."""


@dataclass(frozen=True)
class ExactAngle:
    """The angle ``2*pi * numerator / denominator``, reduced modulo ``period`` turns.

    Phase-type angles live on the circle (``period=1``).  Two-level rotations
    ``exp(-i theta sigma / 2)`` are only periodic modulo 4*pi, so they carry
    ``period=2``.
    """

    numerator: int
    denominator: int = 1
    period: int = 1

    def __post_init__(self):
        if self.denominator == 0:
            raise ZeroDivisionError("ExactAngle denominator must be non-zero")
        if self.period not in (1, 2):
            raise ValueError(f"unsupported angle period {self.period}")
        value = Fraction(self.numerator, self.denominator) % self.period
        object.__setattr__(self, "numerator", value.numerator)
        object.__setattr__(self, "denominator", value.denominator)

    @classmethod
    def from_turns(cls, turns, period: int = 1) -> "ExactAngle":
        if isinstance(turns, float):
            raise TypeError("angles must be exact (int, Fraction or 'p/q' string), not float")
        turns = Fraction(turns)
        return cls(turns.numerator, turns.denominator, period)

    @property
    def turns(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def radians(self) -> float:
        return 2 * pi * self.numerator / self.denominator

    def __neg__(self) -> "ExactAngle":
        return ExactAngle(-self.numerator, self.denominator, self.period)

    def __add__(self, other: "ExactAngle") -> "ExactAngle":
        if not isinstance(other, ExactAngle):
            return NotImplemented
        return ExactAngle.from_turns(self.turns + other.turns, max(self.period, other.period))

    def __sub__(self, other: "ExactAngle") -> "ExactAngle":
        return self + (-other)

    def __mul__(self, k: int) -> "ExactAngle":
        if not isinstance(k, int):
            return NotImplemented
        return ExactAngle.from_turns(self.turns * k, self.period)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def angle_normalize(a: ExactAngle) -> ExactAngle:
    """Reduced form with the numerator in ``[0, denominator * period)``."""
    return ExactAngle(a.numerator, a.denominator, a.period)


def turns(value, period: int = 1) -> ExactAngle:
    """Shorthand: ``turns(Fraction(1, 9))`` is 2*pi/9."""
    return ExactAngle.from_turns(value, period)


class Kind(str, Enum):
    """Gate families.  The value is the mnemonic used in circuit files."""

    # elementary
    H = "H"            # order-d Fourier (Hadamard) gate
    HC = "HC"          # its complex conjugate (inverse)
    X = "X"            # X^(jk) level swap
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    GCX = "GCX"        # control value m, target subspace (j, k)
    # two-level discrete gates
    HJK = "HJK"
    TJK = "T"
    TJKDG = "TDG"
    SJK = "S"
    SJKDG = "SDG"
    # single-qudit phase on one level (S_m)
    PH = "PH"
    # basic diagonal gates
    D = "D"            # diag(1, e^{i phi_1}, ..., e^{i phi_{d-1}})
    DP = "DP"          # D'(a_1..a_{d-1}) without its free global phase
    CD = "CD"
    CDP = "CDP"        # angles a_1..a_{d-1} followed by the block phase
    RK = "RK"          # phase e^{i 2 pi a j m}; a = +-1/d^K
    CCD = "CCD"
    CCDP = "CCDP"
    RBAR = "RBAR"      # phase e^{i 2 pi a m n r}; a = +-1/d^K
    GCCX = "GCCX"
    # wiring
    SWAP = "SWAP"
    RELABEL = "RELABEL"  # logical swap, zero cost


_ARITY = {
    Kind.H: 1, Kind.HC: 1, Kind.X: 1, Kind.RX: 1, Kind.RY: 1, Kind.RZ: 1,
    Kind.HJK: 1, Kind.TJK: 1, Kind.TJKDG: 1, Kind.SJK: 1, Kind.SJKDG: 1,
    Kind.PH: 1, Kind.D: 1, Kind.DP: 1,
    Kind.GCX: 2, Kind.CD: 2, Kind.CDP: 2, Kind.RK: 2, Kind.SWAP: 2, Kind.RELABEL: 2,
    Kind.CCD: 3, Kind.CCDP: 3, Kind.RBAR: 3, Kind.GCCX: 3,
}
_LEVELED = {Kind.X, Kind.RX, Kind.RY, Kind.RZ, Kind.GCX, Kind.GCCX,
            Kind.HJK, Kind.TJK, Kind.TJKDG, Kind.SJK, Kind.SJKDG}
_ROTATIONS = {Kind.RX, Kind.RY, Kind.RZ}
_N_CONTROLS = {Kind.GCX: 1, Kind.CD: 1, Kind.CDP: 1, Kind.PH: 1,
               Kind.GCCX: 2, Kind.CCD: 2, Kind.CCDP: 2}
DIAGONAL_KINDS = frozenset({
    Kind.RZ, Kind.TJK, Kind.TJKDG, Kind.SJK, Kind.SJKDG, Kind.PH, Kind.D, Kind.DP,
    Kind.CD, Kind.CDP, Kind.RK, Kind.CCD, Kind.CCDP, Kind.RBAR,
})
ELEMENTARY_KINDS = frozenset({
    Kind.H, Kind.HC, Kind.X, Kind.RX, Kind.RY, Kind.RZ, Kind.GCX,
    Kind.HJK, Kind.TJK, Kind.TJKDG, Kind.SJK, Kind.SJKDG, Kind.PH,
    Kind.SWAP, Kind.RELABEL,
})
_SELF_INVERSE = {Kind.X, Kind.GCX, Kind.GCCX, Kind.HJK, Kind.SWAP, Kind.RELABEL}
_DAGGER = {Kind.H: Kind.HC, Kind.HC: Kind.H, Kind.TJK: Kind.TJKDG, Kind.TJKDG: Kind.TJK,
           Kind.SJK: Kind.SJKDG, Kind.SJKDG: Kind.SJK}


def _n_angles(kind: Kind, d: int) -> int:
    if kind in _ROTATIONS or kind in (Kind.PH, Kind.RK, Kind.RBAR):
        return 1
    if kind in (Kind.D, Kind.DP, Kind.CD, Kind.CCD):
        return d - 1
    if kind in (Kind.CDP, Kind.CCDP):
        return d
    return 0


@dataclass(frozen=True)
class GateSpec:
    """One gate instance.

    ``qudits`` lists controls first, target last.  ``levels`` is the subspace
    ``(j, k)`` with ``j < k``; ``controls`` holds control values (for ``PH`` the
    single entry is the phased level).  ``tag`` names the block a gate came
    from and is ignored by equality.
    """

    kind: Kind
    qudits: tuple[int, ...]
    levels: tuple[int, int] | None = None
    controls: tuple[int, ...] = ()
    angles: tuple[ExactAngle, ...] = ()
    k: int | None = None
    tag: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "qudits", tuple(int(q) for q in self.qudits))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        object.__setattr__(self, "angles", tuple(self.angles))
        if self.levels is not None:
            j, k = (int(x) for x in self.levels)
            if j == k:
                raise CircuitError(f"{self.kind.value}: subspace levels must differ, got j=k={j}")
            object.__setattr__(self, "levels", (min(j, k), max(j, k)))
        period = 2 if self.kind in _ROTATIONS else 1
        object.__setattr__(self, "angles", tuple(
            a if isinstance(a, ExactAngle) and a.period == period else ExactAngle.from_turns(
                a.turns if isinstance(a, ExactAngle) else a, period)
            for a in self.angles))

    @property
    def is_diagonal(self) -> bool:
        return self.kind in DIAGONAL_KINDS

    def validate(self, d: int, w: int | None = None) -> None:
        kind = self.kind
        if len(self.qudits) != _ARITY[kind]:
            raise CircuitError(f"{kind.value} acts on {_ARITY[kind]} qudit(s), got {len(self.qudits)}")
        if len(set(self.qudits)) != len(self.qudits):
            raise CircuitError(f"{kind.value}: qudit indices must be distinct {self.qudits}")
        if w is not None and any(not 0 <= q < w for q in self.qudits):
            raise CircuitError(f"{kind.value}: qudit index out of range [0, {w}) in {self.qudits}")
        if kind in _LEVELED:
            if self.levels is None:
                raise CircuitError(f"{kind.value} requires subspace levels j<k")
            if not 0 <= self.levels[0] < self.levels[1] < d:
                raise CircuitError(f"{kind.value}: levels {self.levels} out of range for d={d}")
        elif self.levels is not None:
            raise CircuitError(f"{kind.value} takes no subspace levels")
        nc = _N_CONTROLS.get(kind, 0)
        if len(self.controls) != nc:
            raise CircuitError(f"{kind.value} needs {nc} control value(s), got {len(self.controls)}")
        if any(not 0 <= c < d for c in self.controls):
            raise CircuitError(f"{kind.value}: control value out of range for d={d}")
        na = _n_angles(kind, d)
        if len(self.angles) != na:
            raise CircuitError(f"{kind.value} needs {na} angle(s) for d={d}, got {len(self.angles)}")
        if kind in (Kind.RK, Kind.RBAR):
            if self.k is None or self.k < 1:
                raise CircuitError(f"{kind.value} requires K >= 1")
            unit = Fraction(1, d ** self.k)
            if self.angles[0].turns not in (unit, (1 - unit) % 1):
                raise CircuitError(f"{kind.value}: angle must be +-1/d^K, got {self.angles[0]}")
        elif self.k is not None:
            raise CircuitError(f"{kind.value} takes no K parameter")

    def inverse(self) -> "GateSpec":
        if self.kind in _SELF_INVERSE:
            return self
        if self.kind in _DAGGER:
            return replace(self, kind=_DAGGER[self.kind])
        return replace(self, angles=tuple(-a for a in self.angles))

    def on(self, *qudits: int) -> "GateSpec":
        """Same gate acting on different qudits."""
        return replace(self, qudits=tuple(qudits))


@dataclass(frozen=True)
class QuditSystem:
    """``w`` qudits of dimension ``d`` split into named contiguous registers.

    Within a register the first qudit carries the most significant digit.
    """

    d: int
    w: int
    registers: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self):
        if self.d < 2:
            raise CircuitError(f"qudit dimension must be >= 2, got {self.d}")
        if self.w < 1:
            raise CircuitError(f"width must be >= 1, got {self.w}")
        regs = tuple((str(n), int(s), int(e)) for n, s, e in self.registers)
        if not regs:
            regs = (("q", 0, self.w),)
        names = [n for n, _, _ in regs]
        if len(set(names)) != len(names):
            raise CircuitError(f"duplicate register name in {names}")
        covered = sorted((s, e) for _, s, e in regs)
        pos = 0
        for s, e in covered:
            if s != pos or e <= s:
                raise CircuitError(f"registers must be disjoint and cover [0, {self.w}): {regs}")
            pos = e
        if pos != self.w:
            raise CircuitError(f"registers must be disjoint and cover [0, {self.w}): {regs}")
        object.__setattr__(self, "registers", regs)

    @classmethod
    def from_sizes(cls, d: int, sizes: Mapping[str, int] | Sequence[tuple[str, int]]) -> "QuditSystem":
        items = sizes.items() if isinstance(sizes, Mapping) else sizes
        regs, pos = [], 0
        for name, size in items:
            regs.append((name, pos, pos + size))
            pos += size
        return cls(d, pos, tuple(regs))

    @property
    def dim(self) -> int:
        return self.d ** self.w

    def register(self, name: str) -> range:
        for n, s, e in self.registers:
            if n == name:
                return range(s, e)
        raise KeyError(f"no register named {name!r}")

    @property
    def register_names(self) -> list[str]:
        return [n for n, _, _ in self.registers]

    def basis_index(self, values: Mapping[str, int]) -> int:
        """Index of the basis state holding ``values[name]`` in each register (others zero)."""
        digits = [0] * self.w
        for name, value in values.items():
            r = self.register(name)
            size = len(r)
            if not 0 <= value < self.d ** size:
                raise CircuitError(f"value {value} does not fit register {name!r}")
            for pos in reversed(r):
                digits[pos] = value % self.d
                value //= self.d
        index = 0
        for digit in digits:
            index = index * self.d + digit
        return index

    def register_values(self, index: int) -> dict[str, int]:
        digits = []
        for _ in range(self.w):
            digits.append(index % self.d)
            index //= self.d
        digits.reverse()
        out = {}
        for name, s, e in self.registers:
            value = 0
            for pos in range(s, e):
                value = value * self.d + digits[pos]
            out[name] = value
        return out


@dataclass(frozen=True)
class Circuit:
    system: QuditSystem
    gates: tuple[GateSpec, ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def validate(self) -> "Circuit":
        for i, g in enumerate(self.gates):
            try:
                g.validate(self.system.d, self.system.w)
            except CircuitError as exc:
                raise CircuitError(f"gate {i}: {exc}") from None
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def with_gates(self, gates: Iterable[GateSpec], label: str | None = None) -> "Circuit":
        return Circuit(self.system, tuple(gates), self.label if label is None else label)


def inverse(c: Circuit) -> Circuit:
    """Reverse gate order and invert every gate (angles negated, H -> conj(H))."""
    return c.with_gates((g.inverse() for g in reversed(c.gates)),
                        label=f"inverse({c.label})" if c.label else "")


def compose(a: Circuit, b: Circuit) -> Circuit:
    """Run ``a`` then ``b``."""
    if a.system != b.system:
        raise CircuitError("cannot compose circuits over different qudit systems")
    return Circuit(a.system, a.gates + b.gates, a.label or b.label)
