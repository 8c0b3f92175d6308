"""Depolarizing gate noise and symmetric readout flips.

With probability ``p`` a noisy gate is followed by a uniformly chosen
non-identity Pauli: p/3 each for one qubit, p/15 each for two.  Rz is a
virtual frame update and never carries noise.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction

import numpy as np

from .circuit import Gate

PAULI_LABELS = "IXYZ"
P1Q_RATIO = Fraction(1, 20)
PRO_RATIO = Fraction(5, 4)
MAX_P2Q = 0.8


def parse_probability(value: str | float) -> float:
    """Accept ``0.0004``, ``"0.0004"``, ``"4e-4"`` or ``"0.04%"``."""
    if isinstance(value, (int, float)):
        p = float(value)
    else:
        s = str(value).strip()
        scale = 1
        if s.endswith("%"):
            s, scale = s[:-1].strip(), 100
        try:
            p = float(Decimal(s) / scale)
        except InvalidOperation:
            raise ValueError(f"not a probability: {value!r}") from None
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {value!r}")
    return p


@dataclass(frozen=True)
class NoiseModel:
    p1q: float = 0.0
    p2q: float = 0.0
    p_ro: float = 0.0

    def __post_init__(self):
        for name in ("p1q", "p2q", "p_ro"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")

    @classmethod
    def from_p2q(cls, p2q: float | str) -> NoiseModel:
        """Scale single-qubit and readout rates with the two-qubit rate."""
        p = parse_probability(p2q)
        if p > MAX_P2Q:
            raise ValueError(f"p2q={p} exceeds {MAX_P2Q}")
        exact = Fraction(p)
        return cls(float(exact * P1Q_RATIO), p, float(exact * PRO_RATIO))

    @property
    def is_noiseless(self) -> bool:
        return self.p1q == 0 and self.p2q == 0 and self.p_ro == 0

    def describe(self) -> str:
        return f"p1q={self.p1q!r} p2q={self.p2q!r} p_ro={self.p_ro!r}"


@dataclass(frozen=True)
class PauliEvent:
    qubits: tuple[int, ...]
    paulis: tuple[str, ...]

    def __post_init__(self):
        if len(self.qubits) != len(self.paulis) or len(self.qubits) not in (1, 2):
            raise ValueError("a Pauli event covers one or two qubits")
        if all(p == "I" for p in self.paulis):
            raise ValueError("identity is not an error event")

    @property
    def codes(self) -> tuple[int, ...]:
        return tuple(PAULI_LABELS.index(p) for p in self.paulis)


def noise_class(gate: Gate) -> int:
    """0 for noiseless gates, 1 for noisy one-qubit, 2 for two-qubit."""
    if gate.kind in ("rx", "ry"):
        return 1
    if gate.kind == "rzz":
        return 2
    if gate.kind in ("rz", "mcz"):
        return 0
    raise ValueError(f"{gate.kind} is not native; lower the circuit first")


def pauli_from_index(qubits: tuple[int, ...], index: int) -> PauliEvent:
    """1..3 for one qubit; 1..15 for two (first qubit is the high base-4 digit)."""
    if len(qubits) == 1:
        return PauliEvent(qubits, (PAULI_LABELS[index],))
    a, b = divmod(index, 4)
    return PauliEvent(qubits, (PAULI_LABELS[a], PAULI_LABELS[b]))


def sample_after_gate(model: NoiseModel, gate: Gate, rng: np.random.Generator) -> PauliEvent | None:
    cls = noise_class(gate)
    if cls == 0:
        return None
    p = model.p1q if cls == 1 else model.p2q
    if p <= 0 or rng.random() >= p:
        return None
    return pauli_from_index(gate.qubits, int(rng.integers(1, 4 if cls == 1 else 16)))


def apply_readout_noise(model: NoiseModel, bits, rng: np.random.Generator):
    """Flip each bit independently with probability ``p_ro``.

    ``bits`` may be a 0/1 string or an integer array; the same type is
    returned.
    """
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
        flipped = apply_readout_noise(model, arr, rng)
        return "".join("1" if b else "0" for b in flipped)
    arr = np.asarray(bits).astype(np.uint8)
    flips = rng.random(arr.shape) < model.p_ro
    return arr ^ flips.astype(np.uint8)
