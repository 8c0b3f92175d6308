"""Lowering to the native alphabet {Rx, Ry, Rz, Rzz} and two-qubit cost accounting.

Rz is treated as a virtual frame update.  CNOT and CZ are built around a
single Rzz(-pi/2); multi-controlled Z uses a Gray-code network of CNOT and
Rz that realises the phase polynomial of diag(1, ..., 1, -1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, rx, ry, rz, rzz

MCZ_MODES = ("gray", "unitary")


def gray_code(bits: int) -> list[int]:
    return [i ^ (i >> 1) for i in range(1 << bits)]


def _cz(a: int, b: int) -> list[Gate]:
    # CZ = e^{i pi/4} Rz_a(pi/2) Rz_b(pi/2) Rzz(-pi/2)
    return [rzz(a, b, -math.pi / 2), rz(a, math.pi / 2), rz(b, math.pi / 2)]


def _gray_mcz(qubits: tuple[int, ...]) -> list[Gate]:
    """Phase pi * x_0 x_1 ... x_{m-1} as a sum of parity phases.

    Each nonempty subset S contributes a phase
    (-1)^{|S|+1} pi / 2^{m-1} on the parity of S.  Subsets whose largest
    member is qubit j are accumulated on j by walking a Gray code over the
    qubits before it, one CNOT per step.
    """
    m = len(qubits)
    if m == 2:
        return _cz(*qubits)
    unit = math.pi / 2 ** (m - 1)
    out: list[Gate] = []
    for j in range(m):
        target = qubits[j]
        codes = gray_code(j)
        prev = 0
        for code in codes:
            diff = code ^ prev
            if diff:
                out.append(Gate("cnot", (qubits[diff.bit_length() - 1], target)))
            weight = code.bit_count() + 1
            sign = 1 if weight % 2 else -1
            out.append(rz(target, sign * unit))
            prev = code
        if prev:
            out.append(Gate("cnot", (qubits[prev.bit_length() - 1], target)))
    return out


def lower_gate(gate: Gate, mcz: str = "gray") -> list[Gate] | None:
    """One lowering step; ``None`` when the gate is already native.

    The result may still contain CNOTs (from the MCZ network), which lower
    again on the next step.
    """
    if gate.is_native:
        return None
    kind, q = gate.kind, gate.qubits
    if kind == "h":
        return [rz(q[0], math.pi / 2), rx(q[0], math.pi / 2), rz(q[0], math.pi / 2)]
    if kind == "x":
        return [rx(q[0], math.pi)]
    if kind == "cnot":
        c, t = q
        return [ry(t, -math.pi / 2)] + _cz(c, t) + [ry(t, math.pi / 2)]
    if kind == "mcz":
        if mcz == "unitary":
            return None
        if mcz != "gray":
            raise ValueError(f"unknown MCZ mode {mcz!r}")
        return _gray_mcz(q)
    raise ValueError(f"cannot lower {kind}")


def is_native_gate(gate: Gate, mcz: str = "gray") -> bool:
    return gate.is_native or (mcz == "unitary" and gate.kind == "mcz")


def lower_to_native(circuit: Circuit, mcz: str = "gray") -> Circuit:
    if mcz not in MCZ_MODES:
        raise ValueError(f"mcz must be one of {MCZ_MODES}")
    out: list[Gate] = []

    def emit(g: Gate):
        sub = lower_gate(g, mcz)
        if sub is None:
            out.append(g)
        else:
            for s in sub:
                emit(s)

    for g in circuit.gates:
        emit(g)
    return Circuit(circuit.width, tuple(out), circuit.label)


@dataclass(frozen=True)
class CostReport:
    twoq_count: int
    twoq_depth: int
    oneq_noisy_count: int


def cost_report(circuit: Circuit) -> CostReport:
    """Two-qubit gate count, greedy ASAP two-qubit depth and noisy 1q count."""
    bad = [g for g in circuit.gates if not (g.is_native or g.kind == "mcz")]
    if bad:
        raise ValueError(f"circuit is not lowered: found {bad[0].dump()}")
    if any(g.kind == "mcz" and len(g.qubits) > 2 for g in circuit.gates):
        # exact multi-qubit MCZ is outside the two-qubit accounting
        raise ValueError("cost accounting needs MCZ lowered to two-qubit gates")
    layer = [0] * circuit.width
    count = depth = oneq = 0
    for g in circuit.gates:
        if g.kind in ("rzz", "mcz"):
            a, b = g.qubits
            d = max(layer[a], layer[b]) + 1
            layer[a] = layer[b] = d
            depth = max(depth, d)
            count += 1
        elif g.kind in ("rx", "ry"):
            oneq += 1
    return CostReport(count, depth, oneq)
