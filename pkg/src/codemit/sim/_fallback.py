"""Pure numpy versions of the statevector kernels."""
from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=256)
def _bit(n: int, q: int) -> np.ndarray:
    return ((np.arange(1 << n) >> (n - 1 - q)) & 1).astype(bool)


@lru_cache(maxsize=256)
def _cnot_sources(n: int, c: int, t: int) -> tuple[np.ndarray, np.ndarray]:
    src = np.flatnonzero(_bit(n, c) & ~_bit(n, t))
    return src, src | (1 << (n - 1 - t))


def apply_1q(psi, n, q, m00, m01, m10, m11):
    v = psi.reshape(-1, 2, 1 << (n - 1 - q))
    a = v[:, 0, :].copy()
    b = v[:, 1, :]
    v[:, 0, :] = m00 * a + m01 * b
    v[:, 1, :] = m10 * a + m11 * b


def apply_cnot(psi, n, c, t):
    lo, hi = _cnot_sources(n, c, t)
    psi[lo], psi[hi] = psi[hi], psi[lo].copy()


def apply_rz(psi, n, q, theta):
    ph = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    psi *= np.where(_bit(n, q), ph[1], ph[0])


def apply_rzz(psi, n, a, b, theta):
    ph = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    psi *= np.where(_bit(n, a) ^ _bit(n, b), ph[1], ph[0])


def apply_pauli(psi, n, q, code):
    v = psi.reshape(-1, 2, 1 << (n - 1 - q))
    if code == 1:
        v[:, [0, 1], :] = v[:, [1, 0], :]
    elif code == 2:
        a = v[:, 0, :].copy()
        v[:, 0, :] = -1j * v[:, 1, :]
        v[:, 1, :] = 1j * a
    elif code == 3:
        v[:, 1, :] *= -1


def apply_mcz(psi, mask):
    idx = np.arange(psi.shape[0])
    psi[(idx & mask) == mask] *= -1


def sample_index(psi, u):
    w = psi.real**2 + psi.imag**2
    cdf = np.cumsum(w)
    i = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    i = min(i, len(w) - 1)
    while w[i] == 0 and i > 0:
        i -= 1
    return i


def _full_indices(spread, free):
    rest = [0]
    sub = 0
    while sub != free:
        sub = (sub - free) & free
        rest.append(sub)
    return np.asarray(rest, dtype=np.int64)[:, None] | spread[None, :]


def apply_monomial(psi, scratch, spread, free, perm, phase, use_perm, use_phase):
    src = _full_indices(spread, free)
    vals = psi[src]
    if use_phase:
        vals = vals * phase[None, :]
    if use_perm:
        dst = src[:, perm]
        psi[dst] = vals
    else:
        psi[src] = vals


def apply_h_layer(psi, n, qubits):
    s = 1 / np.sqrt(2)
    for q in qubits:
        apply_1q(psi, n, int(q), s, s, s, -s)
