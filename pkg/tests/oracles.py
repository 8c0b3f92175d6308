"""Independent brute-force references used by the tests.

Nothing here imports the package's decoding or simulation code: parity
checks come straight from row strings, decoders enumerate error patterns,
and circuit unitaries are assembled from textbook gate matrices.
"""
from __future__ import annotations

from functools import reduce
from itertools import combinations, product

import numpy as np

# The same H matrices as the registry, kept here as plain text so the oracle
# does not depend on the registry parser.
H_ROWS = {
    "[11,7,3]": ["00001111000", "01110010100", "10110100010", "11011000001"],
    "[13,7,3]": ["1000100100000", "0100010010000", "0010001001000", "0001101000100",
                 "1010010000010", "0101000000001"],
    "[15,7,3]": ["100010010000000", "010001001000000", "001000100100000", "000100000010000",
                 "100000000001000", "010010000000100", "001001000000010", "000100100000001"],
    "[15,7,5]": ["110100010000000", "011010001000000", "001101000100000", "000110100010000",
                 "110111000001000", "011011100000100", "111001100000010", "101000100000001"],
    "[17,7,3]": ["10000101000000000", "01000000100000000", "00100010010000000",
                 "10000000001000000", "01000000000100000", "00100000000010000",
                 "00010100000001000", "00010000000000100", "00001010000000010",
                 "00001000000000001"],
    "[17,11,3]": ["10010101000100000", "10001010100010000", "01010010010001000",
                  "01001100001000100", "00100001010000010", "00100000101000001"],
}
DISTANCE = {"[11,7,3]": 3, "[13,7,3]": 3, "[15,7,3]": 3, "[15,7,5]": 5, "[17,7,3]": 3,
            "[17,11,3]": 3}


def h_matrix(name: str) -> np.ndarray:
    return np.array([[int(c) for c in row] for row in H_ROWS[name]], dtype=np.uint8)


def generator(H: np.ndarray) -> np.ndarray:
    m, n = H.shape
    k = n - m
    P = H[:, :k].T
    return np.concatenate([np.eye(k, dtype=np.uint8), P], axis=1)


def all_codewords(H: np.ndarray) -> np.ndarray:
    """Row i is the codeword of message i (message bits MSB first)."""
    G = generator(H)
    k = G.shape[0]
    msgs = np.array(list(product([0, 1], repeat=k)), dtype=np.uint8)
    return (msgs @ G) % 2


def min_distance(H: np.ndarray) -> int:
    cw = all_codewords(H)
    return int(cw[1:].sum(axis=1).min())


def syndrome(H: np.ndarray, word: np.ndarray) -> tuple[int, ...]:
    return tuple(int(b) for b in (H @ word) % 2)


def reference_table(H: np.ndarray, t: int):
    """Syndrome -> error positions, built by explicit enumeration.

    Weight 1..t patterns in lexicographic order (first one wins), then
    weight t+1 patterns whose syndrome is new and has a single candidate.
    Returns (table, n_base, n_extension).
    """
    m, n = H.shape
    table = {tuple([0] * m): ()}
    for w in range(1, t + 1):
        for pos in combinations(range(n), w):
            e = np.zeros(n, dtype=np.uint8)
            e[list(pos)] = 1
            table.setdefault(syndrome(H, e), pos)
    n_base = len(table)
    cands: dict[tuple, list] = {}
    for pos in combinations(range(n), t + 1):
        e = np.zeros(n, dtype=np.uint8)
        e[list(pos)] = 1
        s = syndrome(H, e)
        if s not in table:
            cands.setdefault(s, []).append(pos)
    ext = {s: c[0] for s, c in cands.items() if len(c) == 1}
    table.update(ext)
    return table, n_base, len(ext)


def nearest_codewords(H: np.ndarray, word: np.ndarray) -> tuple[int, list[int]]:
    """Minimum Hamming distance to the code and all messages achieving it."""
    cw = all_codewords(H)
    dist = (cw ^ word[None, :]).sum(axis=1)
    best = int(dist.min())
    return best, [int(i) for i in np.flatnonzero(dist == best)]


# -- dense circuit reference --------------------------------------------------

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _rot(P, theta):
    return np.cos(theta / 2) * np.eye(P.shape[0]) - 1j * np.sin(theta / 2) * P


def embed(ops: dict[int, np.ndarray], n: int) -> np.ndarray:
    """Tensor product with qubit 0 as the leftmost (most significant) factor."""
    return reduce(np.kron, [ops.get(q, I2) for q in range(n)])


def gate_matrix(kind: str, qubits, theta, n: int) -> np.ndarray:
    if kind == "rx":
        return embed({qubits[0]: _rot(X, theta)}, n)
    if kind == "ry":
        return embed({qubits[0]: _rot(Y, theta)}, n)
    if kind == "rz":
        return embed({qubits[0]: _rot(Z, theta)}, n)
    if kind == "rzz":
        zz = embed({qubits[0]: Z, qubits[1]: Z}, n)
        return np.cos(theta / 2) * np.eye(1 << n) - 1j * np.sin(theta / 2) * zz
    if kind == "x":
        return embed({qubits[0]: X}, n)
    if kind == "h":
        return embed({qubits[0]: HAD}, n)
    if kind == "cnot":
        c, t = qubits
        p0 = embed({c: np.diag([1, 0]).astype(complex)}, n)
        p1 = embed({c: np.diag([0, 1]).astype(complex), t: X}, n)
        return p0 + p1
    if kind == "mcz":
        d = np.ones(1 << n, dtype=complex)
        for i in range(1 << n):
            if all((i >> (n - 1 - q)) & 1 for q in qubits):
                d[i] = -1
        return np.diag(d)
    raise ValueError(kind)


def circuit_unitary(gates, n: int) -> np.ndarray:
    U = np.eye(1 << n, dtype=complex)
    for g in gates:
        U = gate_matrix(g.kind, g.qubits, g.theta, n) @ U
    return U


def equal_up_to_phase(A: np.ndarray, B: np.ndarray, tol: float = 1e-9) -> bool:
    idx = np.unravel_index(np.argmax(np.abs(B)), B.shape)
    if abs(B[idx]) < 1e-12:
        return bool(np.abs(A).max() < tol)
    phase = A[idx] / B[idx]
    return bool(np.abs(A - phase * B).max() < tol and abs(abs(phase) - 1) < tol)


def pauli_matrix(code: int) -> np.ndarray:
    return (I2, X, Y, Z)[code]


def _small_matrix(kind: str, theta) -> np.ndarray:
    if kind in ("rx", "ry", "rz"):
        return _rot({"rx": X, "ry": Y, "rz": Z}[kind], theta)
    if kind == "rzz":
        return _rot(np.kron(Z, Z), theta)
    if kind == "x":
        return X
    if kind == "h":
        return HAD
    if kind == "cnot":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    raise ValueError(kind)


def apply_local(psi: np.ndarray, U: np.ndarray, qubits, n: int) -> np.ndarray:
    """Contract a 2^m x 2^m matrix into the listed qubits of an n-qubit vector."""
    m = len(qubits)
    t = psi.reshape([2] * n)
    t = np.moveaxis(t, list(qubits), list(range(m)))
    shape = t.shape
    t = (U @ t.reshape(1 << m, -1)).reshape(shape)
    return np.moveaxis(t, list(range(m)), list(qubits)).reshape(-1)


def apply_gate_local(psi: np.ndarray, kind: str, qubits, theta, n: int) -> np.ndarray:
    if kind == "mcz":
        d = -np.ones(1 << len(qubits), dtype=complex)
        d[:-1] = 1
        return apply_local(psi, np.diag(d), qubits, n)
    return apply_local(psi, _small_matrix(kind, theta), qubits, n)
