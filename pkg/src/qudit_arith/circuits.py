"""Builders for the Fourier-basis arithmetic blocks.

Conventions: inside a register the first qudit is the most significant digit.
A register "in the Fourier basis" is the output of :func:`fourier_gates`
without the final reversal, so its first qudit carries the phase
``e^{i 2 pi j a / d^q}`` and its last qudit ``e^{i 2 pi j a / d}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import Circuit, CircuitError, GateSpec, Kind, QuditSystem

SWAP_MODES = ("relabel", "physical")


@dataclass(frozen=True)
class ArithmeticBlock:
    """A built circuit plus the register bookkeeping needed to check it.

    ``input_registers``/``output_registers`` list, in oracle order, the
    registers holding each value before and after the circuit.
    """

    name: str
    circuit: Circuit
    register_roles: dict[str, str]
    sandwich: bool
    params: dict[str, int] = field(default_factory=dict)
    input_registers: tuple[str, ...] = ()
    output_registers: tuple[str, ...] = ()
    ancillas: tuple[str, ...] = ()

    @property
    def system(self) -> QuditSystem:
        return self.circuit.system

    @property
    def d(self) -> int:
        return self.circuit.system.d


def _rk(d: int, k: int, control: int, target: int, tag: str, sign: int = 1) -> GateSpec:
    return GateSpec(Kind.RK, (control, target), angles=(Fraction(sign, d ** k),), k=k, tag=tag)


def fourier_gates(d: int, qudits: Sequence[int], swap_mode: str | None = None,
                  tag: str = "qft") -> list[GateSpec]:
    """QFT over ``qudits``; ``swap_mode=None`` leaves the output digit-reversed."""
    q = len(qudits)
    gates: list[GateSpec] = []
    for i in range(q):
        gates.append(GateSpec(Kind.H, (qudits[i],), tag=tag))
        for k in range(2, q - i + 1):
            gates.append(_rk(d, k, qudits[i + k - 1], qudits[i], tag))
    if swap_mode is not None:
        if swap_mode not in SWAP_MODES:
            raise CircuitError(f"swap_mode must be one of {SWAP_MODES}, got {swap_mode!r}")
        kind = Kind.SWAP if swap_mode == "physical" else Kind.RELABEL
        gates += [GateSpec(kind, (qudits[i], qudits[q - 1 - i]), tag=tag) for i in range(q // 2)]
    return gates


def inverse_gates(gates: Sequence[GateSpec]) -> list[GateSpec]:
    return [g.inverse() for g in reversed(gates)]


def _sandwich(d: int, qudits: Sequence[int], core: list[GateSpec]) -> list[GateSpec]:
    f = fourier_gates(d, qudits)
    return f + core + inverse_gates(f)


def _check_const(name: str, value: int, bound: int) -> None:
    if not 0 <= value < bound:
        raise CircuitError(f"{name}={value} out of range [0, {bound})")


def _check_q(q: int) -> None:
    if q < 1:
        raise CircuitError(f"q must be >= 1, got {q}")


def build_qft(d: int, q: int, swap_mode: str = "relabel") -> ArithmeticBlock:
    _check_q(q)
    system = QuditSystem(d, q, (("x", 0, q),))
    c = Circuit(system, fourier_gates(d, range(q), swap_mode), f"QFT(d={d},q={q})")
    return ArithmeticBlock("qft", c.validate(), {"data": "x"}, False,
                           {"d": d, "q": q}, ("x",), ("x",))


# --- adders -----------------------------------------------------------------

def add_core(d: int, b_reg: Sequence[int], a_reg: Sequence[int], tag: str = "add",
             sign: int = 1) -> list[GateSpec]:
    """Adds the value held in ``b_reg`` to the Fourier-basis register ``a_reg``."""
    q = len(a_reg)
    gates = []
    for i in range(q):
        for k in range(1, q - i + 1):
            gates.append(_rk(d, k, b_reg[i + k - 1], a_reg[i], tag, sign))
    return gates


def addc_angles(d: int, q: int, b: int) -> list[tuple[Fraction, ...]]:
    """Per-qudit phases ``m * (b mod d^(q-i)) / d^(q-i)`` for ``m = 1..d-1``."""
    out = []
    for i in range(q):
        mod = d ** (q - i)
        out.append(tuple(Fraction(m * (b % mod), mod) for m in range(1, d)))
    return out


def addc_core(d: int, a_reg: Sequence[int], b: int, tag: str = "addc") -> list[GateSpec]:
    return [GateSpec(Kind.D, (t,), angles=phis, tag=tag)
            for t, phis in zip(a_reg, addc_angles(d, len(a_reg), b))]


def caddc_core(d: int, control: int, value: int, a_reg: Sequence[int], b: int,
               tag: str = "caddc") -> list[GateSpec]:
    return [GateSpec(Kind.CD, (control, t), controls=(value,), angles=phis, tag=tag)
            for t, phis in zip(a_reg, addc_angles(d, len(a_reg), b))]


def gcaddc_core(d: int, control: int, a_reg: Sequence[int], b: int, tag: str = "gcaddc") -> list[GateSpec]:
    """Adds ``b * e`` where ``e`` is the control qudit's value."""
    mod = d ** len(a_reg)
    gates = []
    for c in range(1, d):
        gates += caddc_core(d, control, c, a_reg, b * c % mod, tag)
    return gates


def mac_core(d: int, x_reg: Sequence[int], a_reg: Sequence[int], b: int, tag: str = "mac") -> list[GateSpec]:
    """Adds ``b * x`` to the Fourier-basis register ``a_reg``."""
    q = len(x_reg)
    mod = d ** len(a_reg)
    gates = []
    for s in range(q):
        gates += gcaddc_core(d, x_reg[q - 1 - s], a_reg, b * d ** s % mod, tag)
    return gates


def mmac_core(d: int, x_reg: Sequence[int], y_reg: Sequence[int], z_reg: Sequence[int],
              tag: str = "mmac") -> list[GateSpec]:
    """Adds ``x * y`` to the Fourier-basis register ``z_reg`` with doubly controlled phases."""
    q = len(z_reg)
    gates = []
    for i in range(q):
        l = q - i  # z_reg[i] carries the phase of (z mod d^l) / d^l
        for k in range(1, l + 1):
            for t in range(l - k + 1):
                cx, cy = x_reg[q - 1 - t], y_reg[q + k - l + t - 1]
                gates.append(GateSpec(Kind.RBAR, (cx, cy, z_reg[i]),
                                      angles=(Fraction(1, d ** k),), k=k, tag=tag))
    return gates


def _two_reg(d: int, q: int, first: str, second: str) -> QuditSystem:
    return QuditSystem.from_sizes(d, [(first, q), (second, q)])


def build_add(d: int, q: int, sandwich: bool = True) -> ArithmeticBlock:
    _check_q(q)
    system = _two_reg(d, q, "b", "a")
    b, a = system.register("b"), system.register("a")
    core = add_core(d, b, a)
    gates = _sandwich(d, a, core) if sandwich else core
    c = Circuit(system, gates, f"ADD(d={d},q={q})")
    return ArithmeticBlock("add", c.validate(), {"b-register": "b", "phi(a)-register": "a"}, sandwich,
                           {"d": d, "q": q}, ("b", "a"), ("b", "a"))


def build_addc(d: int, q: int, b: int, sandwich: bool = True) -> ArithmeticBlock:
    _check_q(q)
    _check_const("b", b, d ** q)
    system = QuditSystem(d, q, (("a", 0, q),))
    core = addc_core(d, range(q), b)
    gates = _sandwich(d, range(q), core) if sandwich else core
    c = Circuit(system, gates, f"ADDC_{b}(d={d},q={q})")
    return ArithmeticBlock("addc", c.validate(), {"phi(a)-register": "a"}, sandwich,
                           {"d": d, "q": q, "b": b}, ("a",), ("a",))


def _control_system(d: int, q: int) -> QuditSystem:
    return QuditSystem.from_sizes(d, [("e", 1), ("a", q)])


def build_caddc(d: int, q: int, c: int, b: int, sandwich: bool = True) -> ArithmeticBlock:
    _check_q(q)
    _check_const("c", c, d)
    _check_const("b", b, d ** q)
    system = _control_system(d, q)
    a = system.register("a")
    core = caddc_core(d, 0, c, a, b)
    gates = _sandwich(d, a, core) if sandwich else core
    circ = Circuit(system, gates, f"C{c}ADDC_{b}(d={d},q={q})")
    return ArithmeticBlock("caddc", circ.validate(), {"control": "e", "phi(a)-register": "a"}, sandwich,
                           {"d": d, "q": q, "b": b, "c": c}, ("e", "a"), ("e", "a"))


def build_gcaddc(d: int, q: int, b: int, sandwich: bool = True) -> ArithmeticBlock:
    _check_q(q)
    _check_const("b", b, d ** q)
    system = _control_system(d, q)
    a = system.register("a")
    core = gcaddc_core(d, 0, a, b)
    gates = _sandwich(d, a, core) if sandwich else core
    circ = Circuit(system, gates, f"GCADDC_{b}(d={d},q={q})")
    return ArithmeticBlock("gcaddc", circ.validate(), {"control": "e", "phi(a)-register": "a"}, sandwich,
                           {"d": d, "q": q, "b": b}, ("e", "a"), ("e", "a"))


def build_mac(d: int, q: int, b: int, sandwich: bool = True) -> ArithmeticBlock:
    _check_q(q)
    _check_const("b", b, d ** q)
    system = _two_reg(d, q, "x", "a")
    x, a = system.register("x"), system.register("a")
    core = mac_core(d, x, a, b)
    gates = _sandwich(d, a, core) if sandwich else core
    circ = Circuit(system, gates, f"MAC_{b}(d={d},q={q})")
    return ArithmeticBlock("mac", circ.validate(), {"x-register": "x", "phi(a)-register": "a"}, sandwich,
                           {"d": d, "q": q, "b": b}, ("x", "a"), ("x", "a"))


def mod_inverse(b: int, n: int) -> int:
    """``b^-1 mod n`` via the extended Euclidean algorithm."""
    r0, r1, s0, s1 = n, b % n, 0, 1
    while r1:
        quot = r0 // r1
        r0, r1 = r1, r0 - quot * r1
        s0, s1 = s1, s0 - quot * s1
    if r0 != 1:
        raise CircuitError(f"{b} is not invertible modulo {n} (gcd {r0})")
    return s0 % n


def build_mulc(d: int, q: int, b: int) -> ArithmeticBlock:
    """``|x>|0> -> |x*b>|0>`` with the product left in the former ancilla register."""
    _check_q(q)
    _check_const("b", b, d ** q)
    b_inv = mod_inverse(b, d ** q)
    system = _two_reg(d, q, "x", "anc")
    x, anc = system.register("x"), system.register("anc")
    gates = _sandwich(d, anc, mac_core(d, x, anc, b, "mulc"))
    gates += _sandwich(d, x, inverse_gates(mac_core(d, anc, x, b_inv, "mulc")))
    circ = Circuit(system, gates, f"MULC_{b}(d={d},q={q})")
    return ArithmeticBlock("mulc", circ.validate(), {"result": "anc", "ancilla": "x"}, True,
                           {"d": d, "q": q, "b": b, "b_inv": b_inv}, ("x", "anc"), ("anc", "x"), ("x",))


def build_mmac(d: int, q: int, sandwich: bool = True) -> ArithmeticBlock:
    _check_q(q)
    system = QuditSystem.from_sizes(d, [("x", q), ("y", q), ("z", q)])
    x, y, z = (system.register(n) for n in ("x", "y", "z"))
    core = mmac_core(d, x, y, z)
    gates = _sandwich(d, z, core) if sandwich else core
    circ = Circuit(system, gates, f"MMAC(d={d},q={q})")
    return ArithmeticBlock("mmac", circ.validate(),
                           {"x-register": "x", "y-register": "y", "phi(z)-register": "z"}, sandwich,
                           {"d": d, "q": q}, ("x", "y", "z"), ("x", "y", "z"))


def smac_gates(d: int, system: QuditSystem, gamma: int, anc_a: str, x: str, anc_b: str,
               z: str) -> list[GateSpec]:
    """``z += gamma * x^2`` using two ancilla registers that are returned to zero."""
    ra, rx, rb, rz = (system.register(n) for n in (anc_a, x, anc_b, z))
    copy = _sandwich(d, ra, add_core(d, rx, ra, "smac.copy"))
    square = _sandwich(d, rb, mmac_core(d, ra, rx, rb, "smac.mmac"))
    accumulate = _sandwich(d, rz, mac_core(d, rb, rz, gamma, "smac.mac"))
    return copy + square + accumulate + inverse_gates(square) + inverse_gates(copy)


def _four_reg(d: int, q: int, names: Sequence[str]) -> QuditSystem:
    return QuditSystem.from_sizes(d, [(n, q) for n in names])


def build_smac(d: int, q: int, gamma: int) -> ArithmeticBlock:
    _check_q(q)
    _check_const("gamma", gamma, d ** q)
    system = _four_reg(d, q, ("anc_a", "x", "anc_b", "z"))
    gates = smac_gates(d, system, gamma, "anc_a", "x", "anc_b", "z")
    circ = Circuit(system, gates, f"SMAC_{gamma}(d={d},q={q})")
    regs = ("anc_a", "x", "anc_b", "z")
    return ArithmeticBlock("smac", circ.validate(),
                           {"ancilla-a": "anc_a", "x-register": "x", "ancilla-b": "anc_b",
                            "accumulator": "z"}, True,
                           {"d": d, "q": q, "gamma": gamma}, regs, regs, ("anc_a", "anc_b"))


def build_diag_operator(d: int, q: int, gamma: int) -> ArithmeticBlock:
    """Multiplies the amplitude of ``|k>`` on ``reg1`` by ``exp(i 2 pi gamma k^2 / d^q)``.

    ``reg2`` is prepared in an eigenstate of the modular increment, the squarer
    adds ``gamma k^2`` to it and the resulting phase kicks back onto ``reg1``;
    ``reg2`` and both ancillas end in ``|0>``.
    """
    _check_q(q)
    _check_const("gamma", gamma, d ** q)
    system = _four_reg(d, q, ("anc_a", "reg1", "anc_b", "reg2"))
    reg2 = system.register("reg2")
    big_q = d ** q
    prep = [GateSpec(Kind.H, (t,), tag="diag.prep") for t in reg2]
    prep += [GateSpec(Kind.D, (t,), angles=tuple(Fraction(-v * d ** (q - 1 - i), big_q) for v in range(1, d)),
                      tag="diag.prep")
             for i, t in enumerate(reg2)]
    gates = prep + smac_gates(d, system, gamma, "anc_a", "reg1", "anc_b", "reg2") + inverse_gates(prep)
    circ = Circuit(system, gates, f"DIAG_{gamma}(d={d},q={q})")
    return ArithmeticBlock("diag", circ.validate(),
                           {"Reg1": "reg1", "Reg2": "reg2", "ancilla-a": "anc_a", "ancilla-b": "anc_b"},
                           True, {"d": d, "q": q, "gamma": gamma}, ("reg1",), ("reg1",),
                           ("anc_a", "anc_b", "reg2"))


BUILDERS = {
    "qft": build_qft, "add": build_add, "addc": build_addc, "caddc": build_caddc,
    "gcaddc": build_gcaddc, "mac": build_mac, "mulc": build_mulc, "mmac": build_mmac,
    "smac": build_smac, "diag": build_diag_operator,
}
