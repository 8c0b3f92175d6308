import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from codemit.angles import generate_angles
from codemit.circuit import (Circuit, Gate, build_encoded_grover, build_encoded_iqp,
                             build_encoder, build_grover, build_iqp, diagonal_layer,
                             optimal_grover_iterations)
from codemit.codes import build_code
from oracles import H_ROWS, all_codewords, circuit_unitary, h_matrix

STUDY_CODES = sorted(H_ROWS)


@pytest.mark.parametrize("name", STUDY_CODES)
def test_encoder_maps_basis_messages_to_codewords(name):
    code = build_code(name)
    enc = build_encoder(code)
    assert enc.count("cnot") == len(enc) == int(h_matrix(name)[:, :code.k].sum())
    cw = all_codewords(h_matrix(name))
    weights = 1 << np.arange(code.n - 1, -1, -1)
    for msg in (0, 1, 5, 2**code.k - 1, 2**(code.k - 1)):
        bits = [(msg >> (code.k - 1 - i)) & 1 for i in range(code.k)] + [0] * code.m
        for g in enc:
            c, t = g.qubits
            bits[t] ^= bits[c]
        assert int(np.dot(bits, weights)) == int(cw[msg] @ weights)


@pytest.mark.parametrize("k,R", [(2, 1), (3, 2), (4, 3), (7, 8), (11, 35)])
def test_iteration_count(k, R):
    assert optimal_grover_iterations(k) == R


@pytest.mark.parametrize("name,R,added", [("[13,7,3]", 8, 238), ("[15,7,5]", 8, 510)])
def test_encoded_grover_cnot_overhead(name, R, added):
    code = build_code(name)
    base = build_grover(7, "1111111", R)
    mit = build_encoded_grover(code, "1111111", R)
    assert mit.count("cnot") - base.count("cnot") == added == (1 + 2 * R) * code.popcount()
    assert mit.count("mcz") == base.count("mcz") == 2 * R


def test_encoded_iqp_cnot_overhead():
    code = build_code("[17,11,3]")
    ang = generate_angles(11, 5)
    base = build_iqp(11, 3, ang.theta_z, ang.theta_zz)
    mit = build_encoded_iqp(code, 3, ang.theta_z, ang.theta_zz)
    assert base.count("cnot") == 0
    assert mit.count("cnot") == 4 * code.popcount() == 88
    assert base.count("rzz") == mit.count("rzz") == 3 * 55


def _encode_state(code, psi_k):
    out = np.zeros(1 << code.n, dtype=complex)
    out[[code.encode(m) for m in range(1 << code.k)]] = psi_k
    return out


@pytest.mark.parametrize("target", ["1111", "0110", "1000"])
def test_encoded_grover_acts_on_the_codespace(target):
    code = build_code("hamming-7-4-3")
    R = optimal_grover_iterations(4)
    zero_n = np.eye(1 << code.n)[0]
    base = circuit_unitary(build_grover(4, target, R).gates, 4)[:, 0]
    mit = circuit_unitary(build_encoded_grover(code, target, R).gates, code.n) @ zero_n
    assert np.allclose(mit, _encode_state(code, base), atol=1e-10)
    assert abs(base[int(target, 2)]) ** 2 == pytest.approx(math.sin(7 * math.asin(0.25)) ** 2)


@pytest.mark.parametrize("L", [0, 1, 3])
def test_encoded_iqp_acts_on_the_codespace(L):
    code = build_code("hamming-7-4-3")
    ang = generate_angles(4, 11)
    base = circuit_unitary(build_iqp(4, L, ang.theta_z, ang.theta_zz).gates, 4)[:, 0]
    mit = circuit_unitary(build_encoded_iqp(code, L, ang.theta_z, ang.theta_zz).gates, 7)[:, 0]
    assert np.allclose(mit, _encode_state(code, base), atol=1e-10)


def test_diagonal_gates_commute_within_a_layer():
    ang = generate_angles(4, 2)
    layer = diagonal_layer(4, ang.theta_z, ang.theta_zz)
    U = circuit_unitary(layer, 4)
    V = circuit_unitary(layer[::-1], 4)
    assert np.allclose(U, V) and np.allclose(U, np.diag(np.diag(U)))
    assert [g.qubits for g in layer[4:]] == list(combinations(range(4), 2))


def test_angle_count_errors():
    with pytest.raises(ValueError, match="single-qubit angles"):
        build_iqp(3, 1, [0.1, 0.2], [0.1, 0.2, 0.3])
    with pytest.raises(ValueError, match="pair angles"):
        build_iqp(3, 1, [0.1, 0.2, 0.3], [0.1])


@pytest.mark.parametrize("bad", ["111", "11a1", 0b1111])
def test_grover_target_validation(bad):
    with pytest.raises((ValueError, TypeError)):
        build_grover(4, bad, 1)


def test_grover_needs_two_qubits():
    with pytest.raises(ValueError):
        build_grover(1, "1", 0)


@pytest.mark.parametrize("kind,qubits,theta", [
    ("cnot", (0, 0), None), ("rx", (0,), None), ("h", (0,), 0.3), ("mcz", (1,), None),
    ("swap", (0, 1), None), ("rzz", (0,), 0.1),
])
def test_gate_validation(kind, qubits, theta):
    with pytest.raises(ValueError):
        Gate(kind, qubits, theta)


def test_out_of_range_qubit():
    with pytest.raises(ValueError, match="outside width"):
        Circuit(2, (Gate("cnot", (0, 2)),))


gates = st.one_of(
    st.builds(lambda q, t: Gate("rx", (q,), t), st.integers(0, 4), st.floats(-7, 7)),
    st.builds(lambda q, t: Gate("rz", (q,), t), st.integers(0, 4), st.floats(-7, 7)),
    st.builds(lambda a, d: Gate("cnot", (a, (a + d) % 5)), st.integers(0, 4), st.integers(1, 4)),
    st.builds(lambda qs: Gate("mcz", tuple(qs)), st.sets(st.integers(0, 4), min_size=2)),
    st.builds(lambda q: Gate("h", (q,)), st.integers(0, 4)),
)


@given(st.lists(gates, max_size=12))
def test_dump_parse_round_trip(gs):
    c = Circuit(5, tuple(gs), "roundtrip")
    back = Circuit.parse(c.dump())
    assert back == c and back.label == "roundtrip"
