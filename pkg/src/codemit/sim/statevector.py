"""Dense statevector and single-gate application."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..circuit import Gate
from . import kernels as K

MAX_WIDTH = 24
_S = 1 / math.sqrt(2)


class ResourceError(RuntimeError):
    """A configured resource guard (qubit width, code size) was exceeded."""


def check_width(width: int) -> None:
    if width > MAX_WIDTH:
        raise ResourceError(f"{width} qubits exceeds the dense statevector cap of {MAX_WIDTH}")


@dataclass
class StateVector:
    width: int
    amplitudes: np.ndarray

    @classmethod
    def zero(cls, width: int) -> StateVector:
        check_width(width)
        psi = np.zeros(1 << width, dtype=np.complex128)
        psi[0] = 1.0
        return cls(width, psi)

    def copy(self) -> StateVector:
        return StateVector(self.width, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real**2 + a.imag**2


def qubit_mask(width: int, qubits) -> int:
    return sum(1 << (width - 1 - q) for q in qubits)


def gate_op(gate: Gate, width: int):
    """Return ``(kernel, args)`` so that ``kernel(psi, *args)`` applies ``gate``
    exactly (CNOT, H, X and MCZ as their ideal unitaries)."""
    q, t = gate.qubits, gate.theta
    kind = gate.kind
    if kind == "rx":
        c, s = math.cos(t / 2), math.sin(t / 2)
        return K.apply_1q, (width, q[0], c, -1j * s, -1j * s, c)
    if kind == "ry":
        c, s = math.cos(t / 2), math.sin(t / 2)
        return K.apply_1q, (width, q[0], c, -s, s, c)
    if kind == "rz":
        return K.apply_rz, (width, q[0], t)
    if kind == "rzz":
        return K.apply_rzz, (width, q[0], q[1], t)
    if kind == "cnot":
        return K.apply_cnot, (width, q[0], q[1])
    if kind == "h":
        return K.apply_1q, (width, q[0], _S, _S, _S, -_S)
    if kind == "x":
        return K.apply_pauli, (width, q[0], 1)
    if kind == "mcz":
        return K.apply_mcz, (qubit_mask(width, q),)
    raise ValueError(f"no kernel for {kind}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply ``gate`` in place and return the state."""
    if max(gate.qubits) >= state.width:
        raise IndexError(f"{gate.dump()} outside a {state.width}-qubit register")
    fn, args = gate_op(gate, state.width)
    fn(state.amplitudes, *args)
    return state
