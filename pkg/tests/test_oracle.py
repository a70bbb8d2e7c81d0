from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from qudit_arith.circuits import build_add, build_mulc
from qudit_arith.core import CircuitError, GateSpec, Kind
from qudit_arith.gates import build_hadamard_d
from qudit_arith.oracle import (OracleSpec, diag_phase_turns, diag_phase_vector, dft_matrix,
                                exhaustive_check, oracle_eval, oracle_spec_for)


def test_examples():
    assert oracle_eval(OracleSpec("gcaddc", 3, 2, {"b": 4}), (2, 1)) == (2, 0)
    assert oracle_eval(OracleSpec("caddc", 3, 2, {"b": 4, "c": 1}), (2, 5)) == (2, 5)
    assert oracle_eval(OracleSpec("mmac", 3, 2), (4, 5, 1)) == (4, 5, 3)
    assert oracle_eval(OracleSpec("mulc", 3, 2, {"b": 4}), (5, 0)) == (2, 0)
    assert oracle_eval(OracleSpec("smac", 3, 2, {"gamma": 2}), (0, 4, 0, 1)) == (0, 4, 0, 6)
    assert oracle_eval(OracleSpec("mac", 3, 2, {"b": 4}), (5, 1)) == (5, 3)


def test_constants_are_reduced_and_checked():
    assert OracleSpec("addc", 3, 2, {"b": 13}).constants["b"] == 4
    with pytest.raises(CircuitError):
        OracleSpec("mulc", 3, 2, {"b": 6})
    with pytest.raises(CircuitError):
        OracleSpec("caddc", 3, 2, {"b": 1, "c": 3})
    with pytest.raises(CircuitError):
        oracle_eval(OracleSpec("add", 3, 2), (9, 0))


SPECS = [OracleSpec("add", 3, 2), OracleSpec("addc", 3, 2, {"b": 5}),
         OracleSpec("caddc", 3, 2, {"b": 5, "c": 2}), OracleSpec("gcaddc", 3, 2, {"b": 5}),
         OracleSpec("mac", 3, 2, {"b": 5}), OracleSpec("mulc", 3, 2, {"b": 5}), OracleSpec("mmac", 3, 2),
         OracleSpec("smac", 3, 2, {"gamma": 5}), OracleSpec("mulc", 2, 3, {"b": 3})]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_oracles_are_bijections(spec):
    outputs = {oracle_eval(spec, v) for v in spec.inputs()}
    assert len(outputs) == len(list(spec.inputs()))


def test_mulc_inverse_oracle():
    mod = 9
    fwd, back = OracleSpec("mulc", 3, 2, {"b": 4}), OracleSpec("mulc", 3, 2, {"b": 7})
    for x in range(mod):
        y, _ = oracle_eval(fwd, (x, 0))
        assert oracle_eval(back, (y, 0))[0] == x


def test_dft_matrix():
    assert np.allclose(dft_matrix(2, 1), np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    assert np.allclose(dft_matrix(3, 1), build_hadamard_d(3))
    m = dft_matrix(3, 2)
    assert np.allclose(m[0], 1 / 3) and np.allclose(m[:, 0], 1 / 3)
    with pytest.raises(CircuitError):
        dft_matrix(3, 8)


def test_diag_phase_vector():
    assert np.array_equal(diag_phase_vector(3, 2, 0), np.ones(9))
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(diag_phase_vector(3, 1, 1), [1, w, w])
    assert np.allclose(np.abs(diag_phase_vector(5, 2, 3)), 1)
    for d, q in product((2, 3, 5), (1, 2)):
        for t in diag_phase_turns(d, q, 2):
            assert (t * d ** q).denominator == 1


def test_exhaustive_check_pass_and_fault_injection():
    block = build_add(3, 2)
    report = exhaustive_check(block, oracle_spec_for(block))
    assert report.ok and report.total == 81
    gates = list(block.circuit.gates)
    i = next(i for i, g in enumerate(gates) if g.kind == Kind.RK and g.tag == "add")
    gates[i] = GateSpec(Kind.RK, gates[i].qudits, angles=(Fraction(2, 3),), k=1)
    broken = type(block)(block.name, block.circuit.with_gates(gates), block.register_roles, True,
                         block.params, block.input_registers, block.output_registers)
    bad = exhaustive_check(broken, oracle_spec_for(block))
    assert not bad.ok and bad.failures and bad.worst_fidelity < 0.5


def test_mulc_exhaustive_qubits():
    block = build_mulc(2, 2, 3)
    report = exhaustive_check(block, oracle_spec_for(block))
    assert report.ok and report.total == 16
