"""Modular-arithmetic circuits for qudits built on the quantum Fourier transform."""
from .core import (Circuit, CircuitError, ExactAngle, GateSpec, Kind, QuditSystem, compose,
                   inverse, turns)
from .circuits import (ArithmeticBlock, build_add, build_addc, build_caddc, build_diag_operator,
                       build_gcaddc, build_mac, build_mmac, build_mulc, build_qft, build_smac)
from .sim import StateVector, circuit_unitary, equal_up_to_global_phase, run_circuit

__version__ = "0.1.0"

__all__ = [
    "ArithmeticBlock", "Circuit", "CircuitError", "ExactAngle", "GateSpec", "Kind", "QuditSystem",
    "StateVector", "build_add", "build_addc", "build_caddc", "build_diag_operator", "build_gcaddc",
    "build_mac", "build_mmac", "build_mulc", "build_qft", "build_smac", "circuit_unitary", "compose",
    "equal_up_to_global_phase", "inverse", "run_circuit", "turns",
]
