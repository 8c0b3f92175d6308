"""Gate-level circuit representation and the circuit families."""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations

from .codes import LinearCode

NATIVE_KINDS = frozenset({"rx", "ry", "rz", "rzz"})
ROTATION_KINDS = frozenset({"rx", "ry", "rz", "rzz"})
DIAGONAL_KINDS = frozenset({"rz", "rzz", "mcz"})
_ARITY = {"rx": 1, "ry": 1, "rz": 1, "x": 1, "h": 1, "rzz": 2, "cnot": 2}
KINDS = frozenset(_ARITY) | {"mcz"}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        if self.kind == "mcz":
            if len(qs) < 2:
                raise ValueError("MCZ needs at least two qubits")
        elif len(qs) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} acts on {_ARITY[self.kind]} qubit(s), got {qs}")
        if len(set(qs)) != len(qs):
            raise ValueError(f"repeated qubit in {self.kind}{qs}")
        if any(q < 0 for q in qs):
            raise ValueError("negative qubit index")
        if self.kind in ROTATION_KINDS:
            if self.theta is None:
                raise ValueError(f"{self.kind} needs an angle")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise ValueError(f"{self.kind} takes no angle")

    @property
    def is_native(self) -> bool:
        return self.kind in NATIVE_KINDS

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in ("rzz", "cnot")

    def dump(self) -> str:
        fields = [str(q) for q in self.qubits]
        if self.theta is not None:
            fields.append(repr(self.theta))
        return f"{self.kind.upper()} {','.join(fields)}"

    @classmethod
    def parse(cls, line: str) -> Gate:
        kind, _, rest = line.strip().partition(" ")
        kind = kind.lower()
        parts = [p for p in rest.replace(" ", "").split(",") if p]
        if kind in ROTATION_KINDS:
            return cls(kind, tuple(int(p) for p in parts[:-1]), float(parts[-1]))
        return cls(kind, tuple(int(p) for p in parts))


def rx(q, theta): return Gate("rx", (q,), theta)
def ry(q, theta): return Gate("ry", (q,), theta)
def rz(q, theta): return Gate("rz", (q,), theta)
def rzz(a, b, theta): return Gate("rzz", (a, b), theta)
def cnot(c, t): return Gate("cnot", (c, t))
def x(q): return Gate("x", (q,))
def h(q): return Gate("h", (q,))
def mcz(qubits): return Gate("mcz", tuple(qubits))


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        if self.width < 1:
            raise ValueError("circuit width must be positive")
        for g in gates:
            if max(g.qubits) >= self.width:
                raise ValueError(f"{g.dump()} addresses a qubit outside width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.width != self.width:
            raise ValueError("width mismatch")
        return Circuit(self.width, self.gates + other.gates, self.label)

    def inverse_cnots(self) -> Circuit:
        """Adjoint of a CNOT-only circuit: the same gates in reverse order."""
        if any(g.kind != "cnot" for g in self.gates):
            raise ValueError("only CNOT circuits are self-inverse gate by gate")
        return Circuit(self.width, self.gates[::-1], self.label)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    @property
    def is_native(self) -> bool:
        return all(g.is_native for g in self.gates)

    def dump(self) -> str:
        head = f"# width={self.width} label={self.label}"
        return "\n".join([head] + [g.dump() for g in self.gates]) + "\n"

    @classmethod
    def parse(cls, text: str) -> Circuit:
        width, label, gates = None, "", []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln:
                continue
            if ln.startswith("#"):
                for tok in ln[1:].split():
                    if tok.startswith("width="):
                        width = int(tok[6:])
                if "label=" in ln:
                    label = ln.split("label=", 1)[1]
                continue
            gates.append(Gate.parse(ln))
        if width is None:
            width = 1 + max((max(g.qubits) for g in gates), default=0)
        return cls(width, tuple(gates), label)


def _bits(target: str | Sequence[int], k: int) -> list[int]:
    bits = [int(b) for b in target]
    if len(bits) != k or any(b not in (0, 1) for b in bits):
        raise ValueError(f"target must be a {k}-bit string, got {target!r}")
    return bits


def build_encoder(code: LinearCode) -> Circuit:
    """CNOT from data qubit ``i`` to parity qubit ``k + j`` for each ``P[i, j] = 1``."""
    gates = [
        cnot(i, code.k + j)
        for i in range(code.k)
        for j in range(code.m)
        if code.P.get(i, j)
    ]
    return Circuit(code.n, tuple(gates), f"encoder {code.name}")


def optimal_grover_iterations(k: int) -> int:
    if not 1 <= k <= 20:
        raise ValueError("k must be in 1..20")
    return math.floor(math.pi / 4 * math.sqrt(2**k))


def _oracle(bits: list[int]) -> list[Gate]:
    frame = [x(q) for q, b in enumerate(bits) if b == 0]
    return frame + [mcz(range(len(bits)))] + frame


def _diffusion(k: int) -> list[Gate]:
    hs = [h(q) for q in range(k)]
    xs = [x(q) for q in range(k)]
    return hs + xs + [mcz(range(k))] + xs + hs


def build_grover(k: int, target: str, R: int) -> Circuit:
    if k < 2:
        raise ValueError("Grover needs k >= 2 (MCZ acts on at least two qubits)")
    bits = _bits(target, k)
    if R < 0:
        raise ValueError("R must be non-negative")
    gates = [h(q) for q in range(k)]
    for _ in range(R):
        gates += _oracle(bits) + _diffusion(k)
    return Circuit(k, tuple(gates), f"grover k={k} target={target} R={R}")


def build_encoded_grover(code: LinearCode, target: str, R: int) -> Circuit:
    k = code.k
    bits = _bits(target, k)
    if R < 0:
        raise ValueError("R must be non-negative")
    enc = build_encoder(code).gates
    dec = enc[::-1]
    gates = [h(q) for q in range(k)] + list(enc)
    for _ in range(R):
        gates += _oracle(bits) + list(dec) + _diffusion(k) + list(enc)
    return Circuit(code.n, tuple(gates), f"encoded grover {code.name} target={target} R={R}")


def _check_angles(k: int, theta_z: Sequence[float], theta_zz: Sequence[float]):
    if len(theta_z) != k:
        raise ValueError(f"expected {k} single-qubit angles, got {len(theta_z)}")
    npairs = k * (k - 1) // 2
    if len(theta_zz) != npairs:
        raise ValueError(f"expected {npairs} pair angles, got {len(theta_zz)}")


def diagonal_layer(k: int, theta_z: Sequence[float], theta_zz: Sequence[float]) -> list[Gate]:
    _check_angles(k, theta_z, theta_zz)
    layer = [rz(q, a) for q, a in enumerate(theta_z)]
    layer += [rzz(i, j, a) for (i, j), a in zip(combinations(range(k), 2), theta_zz)]
    return layer


def build_iqp(k: int, L: int, theta_z: Sequence[float], theta_zz: Sequence[float]) -> Circuit:
    if L < 0:
        raise ValueError("L must be non-negative")
    layer = diagonal_layer(k, theta_z, theta_zz)
    hs = [h(q) for q in range(k)]
    return Circuit(k, tuple(hs + layer * L + hs), f"iqp k={k} L={L}")


def build_encoded_iqp(code: LinearCode, L: int, theta_z: Sequence[float],
                      theta_zz: Sequence[float]) -> Circuit:
    if L < 0:
        raise ValueError("L must be non-negative")
    k = code.k
    layer = diagonal_layer(k, theta_z, theta_zz)
    enc = list(build_encoder(code).gates)
    hs = [h(q) for q in range(k)]
    conj_h = enc[::-1] + hs + enc
    return Circuit(code.n, tuple(conj_h + layer * L + conj_h), f"encoded iqp {code.name} L={L}")
