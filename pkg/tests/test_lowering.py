import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from codemit.circuit import Circuit, Gate, build_encoded_grover, build_grover
from codemit.codes import build_code
from codemit.lowering import cost_report, gray_code, lower_to_native
from oracles import circuit_unitary, equal_up_to_phase


def _same_unitary(circ, mode="gray"):
    low = lower_to_native(circ, mode)
    return equal_up_to_phase(circuit_unitary(low.gates, circ.width),
                             circuit_unitary(circ.gates, circ.width))


@pytest.mark.parametrize("gate", [
    Gate("h", (1,)), Gate("x", (0,)), Gate("cnot", (0, 2)), Gate("cnot", (2, 1)),
    Gate("mcz", (0, 2)), Gate("mcz", (2, 0, 1)),
])
def test_single_gate_lowering_matches_ideal(gate):
    circ = Circuit(3, (gate,))
    assert _same_unitary(circ)
    assert lower_to_native(circ).is_native


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_gray_mcz_is_exact(m):
    circ = Circuit(m, (Gate("mcz", tuple(range(m))[::-1]),))
    assert _same_unitary(circ)
    # independent count: the j-th qubit is visited by a closed Gray walk of 2^j CNOTs
    expect = 1 if m == 2 else sum(2**j for j in range(1, m))
    assert cost_report(lower_to_native(circ)).twoq_count == expect


def test_gray_code_sequence():
    codes = gray_code(4)
    assert sorted(codes) == list(range(16))
    assert all(bin(a ^ b).count("1") == 1 for a, b in zip(codes, codes[1:]))


def test_unitary_mode_keeps_mcz():
    circ = Circuit(4, (Gate("mcz", (0, 1, 2, 3)), Gate("cnot", (0, 1))))
    low = lower_to_native(circ, "unitary")
    assert low.count("mcz") == 1 and low.count("cnot") == 0
    with pytest.raises(ValueError):
        cost_report(low)
    with pytest.raises(ValueError):
        lower_to_native(circ, "bogus")


@given(st.lists(st.one_of(
    st.builds(lambda q: Gate("h", (q,)), st.integers(0, 3)),
    st.builds(lambda q: Gate("x", (q,)), st.integers(0, 3)),
    st.builds(lambda a, d: Gate("cnot", (a, (a + d) % 4)), st.integers(0, 3), st.integers(1, 3)),
    st.builds(lambda qs: Gate("mcz", tuple(qs)), st.sets(st.integers(0, 3), min_size=2)),
    st.builds(lambda q, t: Gate("ry", (q,), t), st.integers(0, 3), st.floats(-4, 4)),
), max_size=8))
def test_random_circuits_lower_exactly(gs):
    assert _same_unitary(Circuit(4, tuple(gs)))


def test_grover_cost_matches_gate_census():
    # every CNOT becomes one Rzz; a 7-qubit MCZ costs 2^7 - 2 two-qubit gates
    base = build_grover(7, "1111111", 8)
    mit = build_encoded_grover(build_code("[13,7,3]"), "1111111", 8)
    rb, rm = cost_report(lower_to_native(base)), cost_report(lower_to_native(mit))
    assert rb.twoq_count == 16 * 126 == 2016
    assert rm.twoq_count - rb.twoq_count == 238
    assert rb.twoq_depth <= rb.twoq_count


def test_cost_counts_noisy_single_qubit_gates():
    circ = Circuit(2, (Gate("h", (0,)), Gate("x", (1,)), Gate("cnot", (0, 1))))
    rep = cost_report(lower_to_native(circ))
    # H -> one Rx, X -> one Rx, CNOT -> two Ry; Rz is free
    assert (rep.twoq_count, rep.twoq_depth, rep.oneq_noisy_count) == (1, 1, 4)


def test_depth_uses_parallel_layers():
    circ = Circuit(4, (Gate("rzz", (0, 1), 0.1), Gate("rzz", (2, 3), 0.1),
                       Gate("rzz", (1, 2), 0.1)))
    assert cost_report(circ).twoq_depth == 2


def test_cost_rejects_unlowered_circuit():
    with pytest.raises(ValueError, match="not lowered"):
        cost_report(Circuit(2, (Gate("cnot", (0, 1)),)))
