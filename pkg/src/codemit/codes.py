"""Systematic binary linear codes and the built-in code registry."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .gf2 import BitMatrix, int_to_bits

MAX_K = 20
# Distance is always brute-forced up to this many message bits.
DISTANCE_CHECK_K = 11


class CodeError(ValueError):
    """Raised for malformed, non-systematic or inconsistent codes."""


# Parity-check matrices in systematic form H = [P^T | I].
_REGISTRY_H = {
    "[11,7,3]": (3, [
        "00001111000",
        "01110010100",
        "10110100010",
        "11011000001",
    ]),
    "[13,7,3]": (3, [
        "1000100100000",
        "0100010010000",
        "0010001001000",
        "0001101000100",
        "1010010000010",
        "0101000000001",
    ]),
    "[15,7,3]": (3, [
        "100010010000000",
        "010001001000000",
        "001000100100000",
        "000100000010000",
        "100000000001000",
        "010010000000100",
        "001001000000010",
        "000100100000001",
    ]),
    "[15,7,5]": (5, [
        "110100010000000",
        "011010001000000",
        "001101000100000",
        "000110100010000",
        "110111000001000",
        "011011100000100",
        "111001100000010",
        "101000100000001",
    ]),
    "[17,7,3]": (3, [
        "10000101000000000",
        "01000000100000000",
        "00100010010000000",
        "10000000001000000",
        "01000000000100000",
        "00100000000010000",
        "00010100000001000",
        "00010000000000100",
        "00001010000000010",
        "00001000000000001",
    ]),
    "[17,11,3]": (3, [
        "10010101000100000",
        "10001010100010000",
        "01010010010001000",
        "01001100001000100",
        "00100001010000010",
        "00100000101000001",
    ]),
    "hamming-7-4-3": (3, [
        "1101100",
        "1011010",
        "0111001",
    ]),
}

REGISTRY_NAMES = tuple(_REGISTRY_H)


@dataclass(frozen=True)
class LinearCode:
    """An ``[n, k, d]`` systematic code with generator ``[I_k | P]``."""

    n: int
    k: int
    d: int
    P: BitMatrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not (1 <= self.k < self.n):
            raise CodeError(f"need 1 <= k < n, got n={self.n} k={self.k}")
        if self.k > MAX_K:
            raise CodeError(f"k={self.k} exceeds the supported maximum {MAX_K}")
        if (self.P.rows, self.P.cols) != (self.k, self.n - self.k):
            raise CodeError(
                f"P must be {self.k}x{self.n - self.k}, got {self.P.rows}x{self.P.cols}"
            )
        if self.d < 1:
            raise CodeError("minimum distance must be positive")
        if not self.name:
            object.__setattr__(self, "name", f"[{self.n},{self.k},{self.d}]")

    @property
    def m(self) -> int:
        """Number of parity bits ``n - k``."""
        return self.n - self.k

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @cached_property
    def G(self) -> BitMatrix:
        return BitMatrix.identity(self.k).hstack(self.P)

    @cached_property
    def H(self) -> BitMatrix:
        return self.P.transpose().hstack(BitMatrix.identity(self.m))

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """Syndrome of a single flip at each position (row 0 at bit 0)."""
        return tuple(_reverse_bits(self.H.col(j), self.m) for j in range(self.n))

    def syndrome(self, v: int) -> int:
        """``H v mod 2`` with parity row ``r`` stored at bit ``r``."""
        s = 0
        for j in range(self.n):
            if (v >> (self.n - 1 - j)) & 1:
                s ^= self.columns[j]
        return s

    def encode(self, x: int) -> int:
        return (x << self.m) | self.P.vecmul(x)

    def popcount(self) -> int:
        return self.P.popcount()

    def parity_check_text(self) -> str:
        lines = [f"{self.n} {self.k} {self.d}"]
        for r in self.H.data:
            lines.append(" ".join(int_to_bits(r, self.n)))
        return "\n".join(lines) + "\n"


def _reverse_bits(value: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def normalize_name(name: str) -> str:
    """Map ``"13,7,3"``, ``"[13, 7, 3]"`` or ``"hamming-7-4-3"`` to a registry key."""
    s = name.strip()
    if s.lower().startswith("hamming"):
        return s.lower()
    nums = re.findall(r"\d+", s)
    if len(nums) == 3 and re.fullmatch(r"\[?\s*\d+\s*,\s*\d+\s*,\s*\d+\s*\]?", s):
        return "[" + ",".join(nums) + "]"
    return s


def from_parity_check(H: BitMatrix, d: int, name: str = "", *, check_distance: bool = True) -> LinearCode:
    """Build a code from a systematic parity-check matrix ``[P^T | I]``."""
    m, n = H.rows, H.cols
    k = n - m
    if k < 1:
        raise CodeError(f"parity-check matrix {m}x{n} leaves no message bits")
    if H.submatrix(k, n) != BitMatrix.identity(m):
        raise CodeError(
            "H is not in systematic form: its right "
            f"{m}x{m} block is not the identity"
        )
    P = H.submatrix(0, k).transpose()
    code = LinearCode(n, k, d, P, name)
    if check_distance and k <= DISTANCE_CHECK_K:
        actual = min_distance_bruteforce(code)
        if actual != d:
            raise CodeError(
                f"{code.name}: declared distance {d} but brute-force distance is {actual}"
            )
    return code


def build_code(name_or_H: str | BitMatrix, d: int | None = None) -> LinearCode:
    """Look up a registry code by name, or wrap a systematic ``H``.

    When ``H`` is given directly and ``d`` is omitted, the distance is
    computed by enumeration.
    """
    if isinstance(name_or_H, BitMatrix):
        if d is None:
            k = name_or_H.cols - name_or_H.rows
            probe = from_parity_check(name_or_H, 1, check_distance=False)
            d = min_distance_bruteforce(probe) if k <= MAX_K else 1
        return from_parity_check(name_or_H, d)
    key = normalize_name(name_or_H)
    if key not in _REGISTRY_H:
        raise CodeError(
            f"unknown code {name_or_H!r}; known: {', '.join(REGISTRY_NAMES)}"
        )
    dist, rows = _REGISTRY_H[key]
    return from_parity_check(BitMatrix.from_rows(rows), dist, key)


def load_code_file(path: str | Path, name: str | None = None) -> LinearCode:
    """Read ``n k d`` followed by ``n - k`` rows of space-separated bits."""
    path = Path(path)
    lines = [
        (i, ln.split("#", 1)[0].strip())
        for i, ln in enumerate(path.read_text().splitlines(), start=1)
    ]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise CodeError(f"{path}: empty code file")
    lineno, header = lines[0]
    try:
        n, k, d = (int(x) for x in header.split())
    except ValueError:
        raise CodeError(f"{path}:{lineno}: expected 'n k d', got {header!r}") from None
    body = lines[1:]
    if len(body) != n - k:
        raise CodeError(f"{path}: expected {n - k} rows of H, found {len(body)}")
    rows = []
    for lineno, ln in body:
        bits = ln.split()
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise CodeError(f"{path}:{lineno}: expected {n} bits, got {ln!r}")
        rows.append("".join(bits))
    return from_parity_check(BitMatrix.from_rows(rows), d, name or path.stem)


def resolve_code(spec: str) -> LinearCode:
    """Registry name or path to an H file."""
    p = Path(spec)
    if normalize_name(spec) not in _REGISTRY_H and p.exists():
        return load_code_file(p)
    return build_code(spec)


def codewords(code: LinearCode) -> np.ndarray:
    """All ``2^k`` codewords as integers, indexed by message."""
    if code.k > MAX_K:
        raise CodeError("too many codewords to enumerate")
    rows = np.array(code.G.data, dtype=np.int64)
    words = np.zeros(1 << code.k, dtype=np.int64)
    for i in range(code.k):
        bit = 1 << (code.k - 1 - i)
        idx = np.arange(1 << code.k)
        words ^= np.where(idx & bit, rows[i], 0)
    return words


def min_distance_bruteforce(code: LinearCode) -> int:
    """Minimum Hamming weight over the nonzero codewords."""
    if code.k > MAX_K:
        raise CodeError(f"refusing to enumerate 2^{code.k} codewords")
    words = codewords(code)[1:]
    return int(_popcount64(words).min())


def _popcount64(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    counts = np.zeros(a.shape, dtype=np.int64)
    while a.any():
        counts += (a & np.uint64(1)).astype(np.int64)
        a = a >> np.uint64(1)
    return counts
