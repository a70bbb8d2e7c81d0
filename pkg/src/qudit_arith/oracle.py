"""Classical reference semantics of the arithmetic blocks.

The oracles are plain integer functions with no simulator dependency.  Blocks
with ancillas are defined on every input, not only on zeroed ancillas, using
the map the reversible construction must realise; on zero ancillas they reduce
to the textbook action (e.g. ``(x, 0) -> (b x, 0)`` for MULC).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

import numpy as np

from .core import CircuitError
from .gates import phase

BLOCK_ARITY = {"add": 2, "addc": 1, "caddc": 2, "gcaddc": 2, "mac": 2, "mulc": 2, "mmac": 3, "smac": 4}
_CONTROL_SLOTS = {"caddc": (0,), "gcaddc": (0,)}


def _inverse_mod(b: int, n: int) -> int:
    if gcd(b, n) != 1:
        raise CircuitError(f"{b} has no inverse modulo {n}")
    return pow(b, -1, n)


@dataclass(frozen=True)
class OracleSpec:
    kind: str
    d: int
    q: int
    constants: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in BLOCK_ARITY:
            raise CircuitError(f"no oracle for block kind {self.kind!r}")
        mod = self.d ** self.q
        consts = {k: int(v) % mod for k, v in self.constants.items() if k in ("b", "gamma")}
        if "c" in self.constants:
            if not 0 <= self.constants["c"] < self.d:
                raise CircuitError(f"control value c={self.constants['c']} out of range for d={self.d}")
            consts["c"] = int(self.constants["c"])
        if self.kind == "mulc":
            _inverse_mod(consts.get("b", 0), mod)
        object.__setattr__(self, "constants", consts)

    @property
    def modulus(self) -> int:
        return self.d ** self.q

    def input_ranges(self) -> tuple[int, ...]:
        n = BLOCK_ARITY[self.kind]
        return tuple(self.d if i in _CONTROL_SLOTS.get(self.kind, ()) else self.modulus for i in range(n))

    def inputs(self):
        return product(*(range(r) for r in self.input_ranges()))


def oracle_eval(spec: OracleSpec, inputs: tuple[int, ...]) -> tuple[int, ...]:
    kind, mod = spec.kind, spec.modulus
    b = spec.constants.get("b", 0)
    if len(inputs) != BLOCK_ARITY[kind] or any(not 0 <= v < r for v, r in zip(inputs, spec.input_ranges())):
        raise CircuitError(f"inputs {inputs} out of range for {kind}")
    if kind == "add":
        bb, a = inputs
        return bb, (a + bb) % mod
    if kind == "addc":
        (a,) = inputs
        return ((a + b) % mod,)
    if kind == "caddc":
        e, a = inputs
        return e, (a + b * (e == spec.constants["c"])) % mod
    if kind == "gcaddc":
        e, a = inputs
        return e, (a + b * e) % mod
    if kind == "mac":
        x, a = inputs
        return x, (a + b * x) % mod
    if kind == "mulc":
        x, a = inputs
        prod = (a + b * x) % mod
        return prod, (-_inverse_mod(b, mod) * a) % mod
    if kind == "mmac":
        x, y, z = inputs
        return x, y, (z + x * y) % mod
    if kind == "smac":
        a1, x, a2, z = inputs
        gamma = spec.constants.get("gamma", 0)
        return a1, x, a2, (z + gamma * (a2 + (a1 + x) * x)) % mod
    raise CircuitError(f"no oracle for {kind!r}")


def dft_matrix(d: int, q: int, cap: int = 2187) -> np.ndarray:
    n = d ** q
    if n > cap:
        raise CircuitError(f"d^q = {n} exceeds cap {cap}")
    j = np.arange(n)
    return np.array([[phase(Fraction(int(r * c) % n, n)) for c in j] for r in j]) / np.sqrt(n)


def diag_phase_turns(d: int, q: int, gamma: int) -> list[Fraction]:
    n = d ** q
    return [Fraction(gamma * k * k % n, n) for k in range(n)]


def diag_phase_vector(d: int, q: int, gamma: int) -> np.ndarray:
    return np.array([phase(t) for t in diag_phase_turns(d, q, gamma)])


@dataclass
class CheckReport:
    block: str
    total: int = 0
    passed: int = 0
    worst_fidelity: float = 1.0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def as_dict(self) -> dict:
        return {"block": self.block, "total": self.total, "passed": self.passed, "ok": self.ok,
                "worst_fidelity": self.worst_fidelity, "failures": self.failures[:20]}


def exhaustive_check(block, spec: OracleSpec, tol: float = 1e-9, chunk: int = 729,
                     max_failures: int = 50) -> CheckReport:
    """Run every basis input through the block and compare with ``oracle_eval``."""
    from .sim import run_batch

    system = block.circuit.system
    if len(block.input_registers) != BLOCK_ARITY[spec.kind]:
        raise CircuitError(f"block {block.name!r} does not match oracle {spec.kind!r}")
    report = CheckReport(block.name)
    inputs = list(spec.inputs())
    block.circuit.validate()
    for start in range(0, len(inputs), chunk):
        part = inputs[start:start + chunk]
        idx = [system.basis_index(dict(zip(block.input_registers, vals))) for vals in part]
        states = np.zeros((system.dim, len(part)), dtype=complex)
        states[idx, np.arange(len(part))] = 1.0
        out = run_batch(block.circuit, states, validate=False)
        for col, vals in enumerate(part):
            expected = oracle_eval(spec, vals)
            target = system.basis_index(dict(zip(block.output_registers, expected)))
            fid = float(abs(out[target, col]) ** 2)
            report.total += 1
            report.worst_fidelity = min(report.worst_fidelity, fid)
            if fid >= 1 - tol:
                report.passed += 1
            elif len(report.failures) < max_failures:
                got = int(np.argmax(np.abs(out[:, col])))
                report.failures.append({"input": list(vals), "expected": list(expected),
                                        "got": system.register_values(got), "fidelity": fid})
    return report


def oracle_spec_for(block) -> OracleSpec:
    p = block.params
    return OracleSpec(block.name, p["d"], p["q"],
                      {k: p[k] for k in ("b", "c", "gamma") if k in p})
