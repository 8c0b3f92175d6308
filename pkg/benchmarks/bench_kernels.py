"""Compare the compiled and numpy statevector kernels.

    python benchmarks/bench_kernels.py [--qubits 13 17] [--repeat 20]

Each kernel is timed on a random state with both backends; the last column
is the speedup of the compiled extension.  An end-to-end section times noisy
shots of an encoded Grover circuit with each backend (the numpy run uses a
fresh interpreter so the backend switch happens at import).
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from codemit.sim import _fallback

try:
    from codemit.sim import _kernels
except ImportError:  # extension not built
    _kernels = None

S = 1 / np.sqrt(2)


def _cases(n: int):
    rng = np.random.default_rng(0)
    perm = rng.permutation(1 << 7).astype(np.int64)
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, 1 << 7))
    spread = np.zeros(1 << 7, dtype=np.int64)
    idx = np.arange(1 << 7)
    for i in range(7):
        spread |= ((idx >> (6 - i)) & 1) << (n - 1 - i)
    free = ((1 << n) - 1) & ~int(spread[-1])
    hq = np.arange(7, dtype=np.int64)
    return {
        "1q (H)": lambda K, psi, sc: K.apply_1q(psi, n, 3, S, S, S, -S),
        "cnot": lambda K, psi, sc: K.apply_cnot(psi, n, 1, n - 2),
        "rz": lambda K, psi, sc: K.apply_rz(psi, n, 2, 0.3),
        "rzz": lambda K, psi, sc: K.apply_rzz(psi, n, 0, n - 1, 0.7),
        "pauli Y": lambda K, psi, sc: K.apply_pauli(psi, n, 4, 2),
        "mcz (7)": lambda K, psi, sc: K.apply_mcz(psi, int(spread[-1])),
        "monomial (7)": lambda K, psi, sc: K.apply_monomial(psi, sc, spread, free, perm, phase,
                                                            True, True),
        "H layer (7)": lambda K, psi, sc: K.apply_h_layer(psi, n, hq),
        "sample": lambda K, psi, sc: K.sample_index(psi, 0.37),
    }


def bench_kernels(widths, repeat):
    print(f"{'kernel':<14} {'n':>3} {'numpy us':>10} {'compiled us':>12} {'speedup':>8}")
    for n in widths:
        rng = np.random.default_rng(n)
        base = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        base /= np.linalg.norm(base)
        for name, fn in _cases(n).items():
            row = [name, n]
            for K in (_fallback, _kernels):
                if K is None:
                    row.append(float("nan"))
                    continue
                psi, sc = base.copy(), np.empty_like(base)
                t = min(timeit.repeat(lambda: fn(K, psi, sc), number=1, repeat=repeat))
                row.append(t * 1e6)
            print(f"{row[0]:<14} {row[1]:>3} {row[2]:>10.1f} {row[3]:>12.1f} "
                  f"{row[2] / row[3]:>8.1f}")


_SHOT_SCRIPT = """
import time
from codemit.codes import build_code
from codemit.circuit import build_encoded_grover
from codemit.noise import NoiseModel
from codemit.sim import kernels
from codemit.sim.engine import Simulator
sim = Simulator(build_encoded_grover(build_code("[13,7,3]"), "1111111", 8))
sim.final_state()
t = time.perf_counter()
sim.sample(NoiseModel.from_p2q(4e-4), 1, range({shots}))
print(kernels.BACKEND, (time.perf_counter() - t) / {shots} * 1e3)
"""


def bench_shots(shots):
    print(f"\nencoded Grover [13,7,3], p2q=4e-4, {shots} shots")
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("CODEMIT_PURE_PYTHON", None)
        if pure:
            env["CODEMIT_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", _SHOT_SCRIPT.format(shots=shots)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:<10} {float(out[1]):.2f} ms/shot")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawTextHelpFormatter)
    ap.add_argument("--qubits", type=int, nargs="+", default=[13, 17])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--shots", type=int, default=300)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; only numpy timings are shown")
    bench_kernels(args.qubits, args.repeat)
    bench_shots(args.shots)


if __name__ == "__main__":
    main()
