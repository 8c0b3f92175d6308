"""Monte Carlo Pauli-trajectory simulation.

Every shot is an independent trajectory: the lowered circuit runs on a pure
state, a depolarizing Pauli may follow each noisy native gate, one basis
outcome is measured and readout flips are applied.

The engine samples a shot's error events before touching the state.  Shots
without events all share the noiseless final state.  A shot with events
restarts from the last noiseless checkpoint before its first event and only
expands the gates that actually carry an event into their native sequence;
everything else is applied as the exact (fused) unitary.  Runs of diagonal
gates are folded into a single phase multiplication.
"""
from __future__ import annotations

import math
import os
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit, Gate
from ..lowering import MCZ_MODES, lower_gate
from ..noise import NoiseModel, noise_class
from ..rng import shot_stream
from . import kernels as K
from .statevector import ResourceError, StateVector, check_width, gate_op

CHECKPOINT_BUDGET = int(os.environ.get("CODEMIT_CHECKPOINT_BYTES", 256 << 20))
_BASIS_LIMIT = 1 << 23


@dataclass(frozen=True)
class ShotRecord:
    raw: str
    shot_index: int | None
    seed_used: int | None

    @property
    def value(self) -> int:
        return int(self.raw, 2)


class _Node:
    __slots__ = ("start", "stop", "op", "children", "diag", "gate", "prefix")

    def __init__(self, start, stop, op, children=None, diag=None, gate=None):
        self.start = start
        self.stop = stop
        self.op = op
        self.children = children
        self.diag = diag
        self.gate = gate
        self.prefix = None


_MONOMIAL_KINDS = frozenset({"cnot", "x", "mcz", "rz", "rzz"})
_PREFIX_LIMIT = 1 << 18


class _Support:
    """Index helpers for a subset of qubits inside a wider register."""

    def __init__(self, qubits, width):
        self.qubits = tuple(qubits)
        self.width = width
        s = len(self.qubits)
        self.local = {q: i for i, q in enumerate(self.qubits)}
        idx = np.arange(1 << s, dtype=np.int64)
        spread = np.zeros(1 << s, dtype=np.int64)
        for i, q in enumerate(self.qubits):
            spread |= ((idx >> (s - 1 - i)) & 1) << (width - 1 - q)
        self.spread = spread
        self.free = ((1 << width) - 1) & ~int(spread[-1])
        self.size = 1 << s

    def bit(self, q):
        return len(self.qubits) - 1 - self.local[q]


class _Monomial:
    """A unitary of the form |x> -> phase[x] |perm[x]> on a qubit subset."""

    __slots__ = ("perm", "phase", "inverse")

    def __init__(self, perm, phase):
        self.perm = perm
        self.phase = phase
        self.inverse = np.empty_like(perm)
        self.inverse[perm] = np.arange(len(perm), dtype=np.int64)

    @classmethod
    def identity(cls, size):
        return cls(np.arange(size, dtype=np.int64), np.ones(size, dtype=np.complex128))

    def then(self, gate: Gate, sup: _Support) -> "_Monomial":
        y = self.perm.copy()
        ph = self.phase.copy()
        b = [sup.bit(q) for q in gate.qubits]
        kind = gate.kind
        if kind == "x":
            y ^= 1 << b[0]
        elif kind == "cnot":
            y ^= ((y >> b[0]) & 1) << b[1]
        elif kind == "rz":
            ph *= np.where((y >> b[0]) & 1, np.exp(0.5j * gate.theta), np.exp(-0.5j * gate.theta))
        elif kind == "rzz":
            par = ((y >> b[0]) ^ (y >> b[1])) & 1
            ph *= np.where(par, np.exp(0.5j * gate.theta), np.exp(-0.5j * gate.theta))
        elif kind == "mcz":
            mask = sum(1 << k for k in b)
            ph[(y & mask) == mask] *= -1
        else:
            raise ValueError(f"{kind} is not a monomial gate")
        return _Monomial(y, ph)

    def between(self, later: "_Monomial") -> "_Monomial":
        """The monomial taking this prefix to ``later``."""
        x = self.inverse
        return _Monomial(later.perm[x], later.phase[x] * np.conj(self.phase[x]))

    def op(self, sup: _Support, scratch):
        trivial_perm = bool(np.array_equal(self.perm, np.arange(len(self.perm))))
        trivial_phase = bool(np.all(self.phase == 1))
        return (K.apply_monomial, (scratch, sup.spread, sup.free, self.perm, self.phase,
                                   not trivial_perm, not trivial_phase))


class _DiagRun:
    """Consecutive Rz/Rzz gates evaluated as Walsh-coefficient phases.

    The phase of gate Rz(q, a) is ``-a/2 * s_q`` and of Rzz(q, r, a) is
    ``-a/2 * s_q * s_r`` with ``s = +1`` for bit 0 and ``-1`` for bit 1.
    Cumulative coefficients give the phase of any contiguous segment.
    """

    def __init__(self, gates: list[Gate], start: int, width: int, scratch):
        self.start = start
        self.stop = start + len(gates)
        self.length = len(gates)
        self.sup = _Support(sorted({q for g in gates for q in g.qubits}), width)
        self.scratch = scratch
        s = len(self.sup.qubits)
        terms: dict[tuple[int, ...], int] = {}
        rows = []
        for g in gates:
            key = tuple(sorted(self.sup.local[q] for q in g.qubits))
            col = terms.setdefault(key, len(terms))
            rows.append((col, -0.5 * g.theta))
        coef = np.zeros((len(gates) + 1, len(terms)))
        for i, (col, c) in enumerate(rows):
            coef[i + 1] = coef[i]
            coef[i + 1, col] += c
        self.coef = coef
        self.keys = list(terms)
        idx = np.arange(1 << s)
        self.signs = 1.0 - 2.0 * ((idx[None, :] >> (s - 1 - np.arange(s)[:, None])) & 1)
        self.basis = None
        if len(terms) * (1 << s) <= _BASIS_LIMIT:
            self.basis = np.array([self._term(k) for k in self.keys]).reshape(len(terms), 1 << s)
        self.full = self.segment(0, self.length)
        self.op = self._phase_op(self.full)

    def _term(self, key):
        v = self.signs[key[0]].copy()
        for j in key[1:]:
            v *= self.signs[j]
        return v

    def segment(self, a: int, b: int) -> np.ndarray:
        """Local phase table of gates ``a..b-1`` of the run."""
        c = self.coef[b] - self.coef[a]
        if self.basis is not None:
            table = c @ self.basis
        else:
            table = np.zeros(self.signs.shape[1])
            for ci, key in zip(c, self.keys):
                if ci:
                    table += ci * self._term(key)
        return np.exp(1j * table)

    def _phase_op(self, phase):
        sup = self.sup
        return (K.apply_monomial, (self.scratch, sup.spread, sup.free, sup.spread, phase,
                                   False, True))

    def _apply(self, psi, phase):
        fn, args = self._phase_op(phase)
        fn(psi, *args)

    def run(self, psi, events, e, apply_event):
        a = 0
        while e < len(events) and events[e][0] < self.stop:
            g = events[e][0] - self.start + 1
            if g > a:
                self._apply(psi, self.segment(a, g))
                a = g
            apply_event(psi, events[e])
            e += 1
        if a < self.length:
            self._apply(psi, self.full if a == 0 else self.segment(a, self.length))
        return e


def _leaf_gates(node_gates):
    return all(g.kind in ("rz", "rzz") for g in node_gates)


class Simulator:
    """A compiled circuit ready for repeated noisy sampling."""

    def __init__(self, circuit: Circuit, mcz: str = "gray"):
        if mcz not in MCZ_MODES:
            raise ValueError(f"mcz must be one of {MCZ_MODES}")
        check_width(circuit.width)
        self.circuit = circuit
        self.width = circuit.width
        self.mcz = mcz
        self.native: list[Gate] = []
        self.top: list[_Node] = []
        self._scratch = np.empty(1 << self.width, dtype=np.complex128)
        self._supports: dict[tuple[int, ...], _Support] = {}
        self._prefix_cache: dict[Gate, list[_Monomial]] = {}
        self._compile()
        cls = np.array([noise_class(g) for g in self.native], dtype=np.int8)
        self.sites1 = np.flatnonzero(cls == 1)
        self.sites2 = np.flatnonzero(cls == 2)
        self.top_starts = [node.start for node in self.top]
        self._end = len(self.native)
        self._checkpoints: dict[int, np.ndarray] | None = None
        self._stride = 1
        self._final: np.ndarray | None = None
        self._cdf: np.ndarray | None = None
        self._readout_weights = np.array([1 << (self.width - 1 - j) for j in range(self.width)],
                                         dtype=np.int64)

    # -- compilation -------------------------------------------------------
    def _support(self, qubits) -> _Support:
        key = tuple(sorted(set(qubits)))
        sup = self._supports.get(key)
        if sup is None:
            sup = self._supports[key] = _Support(key, self.width)
        return sup

    def _prefixes(self, gates, sup) -> list[_Monomial]:
        out = [_Monomial.identity(sup.size)]
        for g in gates:
            out.append(out[-1].then(g, sup))
        return out

    def _attach_prefix(self, node: _Node, gates: list[Gate], owner: Gate | None = None):
        """Give a node with monomial children cumulative tables for range fusion."""
        if any(g.kind not in _MONOMIAL_KINDS for g in gates):
            return
        sup = self._support(q for g in gates for q in g.qubits)
        if (len(gates) + 1) * sup.size > _PREFIX_LIMIT:
            return
        if owner is not None and owner in self._prefix_cache:
            prefix = self._prefix_cache[owner]
        else:
            prefix = self._prefixes(gates, sup)
            if owner is not None:
                self._prefix_cache[owner] = prefix
        node.prefix = (sup, prefix)

    def _build(self, gate: Gate) -> tuple[_Node, list[Gate]]:
        start = len(self.native)
        sub = lower_gate(gate, self.mcz)
        if sub is None:
            self.native.append(gate)
            return _Node(start, start + 1, gate_op(gate, self.width), gate=gate), [gate]
        children, leaves = [], []
        for g in sub:
            child, lv = self._build(g)
            children.append(child)
            leaves.extend(lv)
        node = _Node(start, len(self.native), gate_op(gate, self.width), children, gate=gate)
        if gate.kind in _MONOMIAL_KINDS:
            self._attach_prefix(node, list(sub), owner=gate)
        return node, leaves

    def _block(self, nodes: list[_Node], family: str) -> _Node:
        if len(nodes) == 1:
            return nodes[0]
        gates = [n.gate for n in nodes]
        if family == "h":
            qubits = np.array([g.qubits[0] for g in gates], dtype=np.int64)
            op = (K.apply_h_layer, (self.width, qubits))
        else:
            sup = self._support(q for g in gates for q in g.qubits)
            mono = _Monomial.identity(sup.size)
            for g in gates:
                mono = mono.then(g, sup)
            op = mono.op(sup, self._scratch)
        node = _Node(nodes[0].start, nodes[-1].stop, op, list(nodes))
        if family == "mono":
            self._attach_prefix(node, gates)
        return node

    def _compile(self):
        pending: list[Gate] = []
        pending_start = 0
        group: list[_Node] = []
        family = None

        def flush_diag():
            if pending:
                run = _DiagRun(list(pending), pending_start, self.width, self._scratch)
                self.top.append(_Node(run.start, run.stop, run.op, diag=run))
                pending.clear()

        def flush_group():
            nonlocal family
            if group:
                self.top.append(self._block(list(group), family))
                group.clear()
            family = None

        for gate in self.circuit.gates:
            start = len(self.native)
            node, leaves = self._build(gate)
            if _leaf_gates(leaves):
                flush_group()
                if not pending:
                    pending_start = start
                pending.extend(leaves)
                continue
            flush_diag()
            kind = gate.kind
            fam = "mono" if kind in ("cnot", "x", "mcz") else "h" if kind == "h" else None
            if fam == "h" and family == "h" and any(gate.qubits == n.gate.qubits for n in group):
                flush_group()
            if fam is None or fam != family:
                flush_group()
            if fam is None:
                self.top.append(node)
            else:
                family = fam
                group.append(node)
        flush_group()
        flush_diag()

    @property
    def native_circuit(self) -> Circuit:
        return Circuit(self.width, tuple(self.native), self.circuit.label)

    # -- noiseless reference -------------------------------------------------
    def _prepare(self):
        if self._final is not None:
            return
        state_bytes = 16 << self.width
        self._stride = max(1, math.ceil(len(self.top) * state_bytes / CHECKPOINT_BUDGET))
        psi = StateVector.zero(self.width).amplitudes
        cps = {}
        for j, node in enumerate(self.top):
            if j % self._stride == 0:
                cps[j] = psi.copy()
            fn, args = node.op
            fn(psi, *args)
        self._checkpoints = cps
        self._final = psi
        w = psi.real**2 + psi.imag**2
        self._weights = w
        self._cdf = np.cumsum(w)

    def final_state(self) -> np.ndarray:
        """Noiseless output amplitudes (read-only view)."""
        self._prepare()
        out = self._final.view()
        out.flags.writeable = False
        return out

    def probabilities(self) -> np.ndarray:
        self._prepare()
        return self._weights.copy()

    # -- trajectories --------------------------------------------------------
    def _apply_event(self, psi, event):
        _, qubits, codes = event
        for q, c in zip(qubits, codes):
            if c:
                K.apply_pauli(psi, self.width, q, c)

    def _run_node(self, node: _Node, psi, events, e):
        if node.diag is not None:
            return node.diag.run(psi, events, e, self._apply_event)
        if node.children is None:
            fn, args = node.op
            fn(psi, *args)
            while e < len(events) and events[e][0] == node.start:
                self._apply_event(psi, events[e])
                e += 1
            return e
        children = node.children
        count = len(children)
        i = 0
        while i < count:
            nxt = events[e][0] if e < len(events) else self._end
            if nxt < children[i].stop:
                e = self._run_node(children[i], psi, events, e)
                i += 1
                continue
            j = i + 1
            while j < count and children[j].stop <= nxt:
                j += 1
            self._apply_range(node, i, j, psi)
            i = j
        return e

    def _apply_range(self, node: _Node, i: int, j: int, psi):
        if node.prefix is not None and j - i > 1:
            sup, prefix = node.prefix
            fn, args = prefix[i].between(prefix[j]).op(sup, self._scratch)
            fn(psi, *args)
            return
        for child in node.children[i:j]:
            fn, args = child.op
            fn(psi, *args)

    def evolve(self, events) -> np.ndarray:
        """Final state of the trajectory with the given sorted error events.

        Each event is ``(native_index, qubits, pauli_codes)`` with codes
        1 = X, 2 = Y, 3 = Z (0 = identity on that qubit).
        """
        self._prepare()
        if not events:
            return self._final.copy()
        j = bisect_right(self.top_starts, events[0][0]) - 1
        c = (j // self._stride) * self._stride
        psi = self._checkpoints[c].copy()
        for node in self.top[c:j]:
            fn, args = node.op
            fn(psi, *args)
        e = 0
        for node in self.top[j:]:
            if e < len(events) and events[e][0] < node.stop:
                e = self._run_node(node, psi, events, e)
            else:
                fn, args = node.op
                fn(psi, *args)
        return psi

    def sample_events(self, model: NoiseModel, rng: np.random.Generator):
        events = []
        for sites, p, npauli in ((self.sites1, model.p1q, 4), (self.sites2, model.p2q, 16)):
            count = len(sites)
            if p <= 0 or count == 0:
                continue
            if p >= 1:
                hits = list(range(count))
            else:
                hits = []
                pos = int(rng.geometric(p)) - 1
                while pos < count:
                    hits.append(pos)
                    pos += int(rng.geometric(p))
            if not hits:
                continue
            codes = rng.integers(1, npauli, size=len(hits))
            for h, code in zip(hits, codes.tolist()):
                site = int(sites[h])
                gate = self.native[site]
                if npauli == 4:
                    events.append((site, gate.qubits, (code,)))
                else:
                    events.append((site, gate.qubits, divmod(code, 4)))
        events.sort(key=lambda ev: ev[0])
        return events

    def _measure(self, psi, u: float) -> int:
        if psi is None:
            cdf, w = self._cdf, self._weights
            i = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
            i = min(i, len(w) - 1)
            while i > 0 and w[i] == 0:
                i -= 1
            return i
        return int(K.sample_index(psi, u))

    def trajectory(self, model: NoiseModel, rng: np.random.Generator) -> int:
        """One shot: returns the measured index (qubit 0 is the top bit)."""
        self._prepare()
        u = rng.random()
        events = self.sample_events(model, rng)
        outcome = self._measure(self.evolve(events) if events else None, u)
        if model.p_ro > 0:
            flips = rng.random(self.width) < model.p_ro
            if flips.any():
                outcome ^= int(self._readout_weights[flips].sum())
        return outcome

    def sample(self, model: NoiseModel, base_seed: int, indices) -> np.ndarray:
        out = np.empty(len(indices), dtype=np.int64)
        for j, i in enumerate(indices):
            out[j] = self.trajectory(model, shot_stream(base_seed, int(i)))
        return out


# -- module-level API ---------------------------------------------------------

_CACHE: dict[tuple[Circuit, str], Simulator] = {}


def simulator_for(circuit: Circuit, mcz: str = "gray") -> Simulator:
    key = (circuit, mcz)
    sim = _CACHE.get(key)
    if sim is None:
        if len(_CACHE) >= 8:
            _CACHE.pop(next(iter(_CACHE)))
        sim = _CACHE[key] = Simulator(circuit, mcz)
    return sim


def run_trajectory(circuit: Circuit, model: NoiseModel, rng: np.random.Generator,
                   mcz: str = "gray") -> ShotRecord:
    raw = simulator_for(circuit, mcz).trajectory(model, rng)
    return ShotRecord(format(raw, f"0{circuit.width}b"), None, None)


def _worker(args):
    circuit, mcz, model, base_seed, lo, hi = args
    return simulator_for(circuit, mcz).sample(model, base_seed, range(lo, hi))


def sample_raw(circuit: Circuit, model: NoiseModel, n_shots: int, base_seed: int,
               threads: int = 1, mcz: str = "gray") -> np.ndarray:
    """Measured integers for shots ``0..n_shots-1``, in shot order.

    The result does not depend on ``threads``: every shot draws from its
    own stream ``shot_stream(base_seed, i)``.
    """
    if n_shots < 1:
        raise ValueError("n_shots must be at least 1")
    if threads <= 1 or n_shots < 2 * threads:
        return simulator_for(circuit, mcz).sample(model, base_seed, range(n_shots))
    bounds = np.linspace(0, n_shots, threads + 1).astype(int)
    jobs = [(circuit, mcz, model, base_seed, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(_worker, jobs))
    return np.concatenate(parts)


def run_shots(circuit: Circuit, model: NoiseModel, n_shots: int, base_seed: int,
              threads: int = 1, mcz: str = "gray") -> list[ShotRecord]:
    raw = sample_raw(circuit, model, n_shots, base_seed, threads, mcz)
    w = circuit.width
    return [ShotRecord(format(int(v), f"0{w}b"), i, base_seed) for i, v in enumerate(raw)]


def ideal_distribution(circuit: Circuit, mcz: str = "gray") -> np.ndarray:
    """Exact output probabilities of a noiseless, unencoded circuit."""
    if circuit.width > 20:
        raise ResourceError(f"ideal distribution limited to 20 qubits, got {circuit.width}")
    return simulator_for(circuit, mcz).probabilities()


def statevector(circuit: Circuit, mcz: str = "gray") -> np.ndarray:
    return simulator_for(circuit, mcz).final_state().copy()


def simulate_dense(circuit: Circuit) -> StateVector:
    """Gate-by-gate reference evolution without fusion or lowering."""
    state = StateVector.zero(circuit.width)
    for g in circuit.gates:
        fn, args = gate_op(g, circuit.width)
        fn(state.amplitudes, *args)
    return state
