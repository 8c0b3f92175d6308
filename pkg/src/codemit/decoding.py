"""Syndrome-table construction and per-shot decoding with post-selection."""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

import numpy as np

from .codes import LinearCode
from .gf2 import bits_to_int, int_to_bits


class Verdict(enum.Enum):
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"


@dataclass(frozen=True)
class DecodeResult:
    verdict: Verdict
    message: str | None
    corrected_weight: int

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPTED


@dataclass(frozen=True)
class SyndromeTable:
    """Map from syndrome to the sorted flip positions used to correct it.

    Syndrome keys carry parity-check row ``r`` at bit ``r``.
    """

    code: LinearCode
    entries: dict[int, tuple[int, ...]]
    n_base: int  # entries present before the uniqueness extension

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, syndrome: int) -> bool:
        return syndrome in self.entries

    @property
    def n_extension(self) -> int:
        return len(self.entries) - self.n_base

    @cached_property
    def _lookup(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        size = 1 << self.code.m
        valid = np.zeros(size, dtype=bool)
        flips = np.zeros(size, dtype=np.int64)
        weight = np.zeros(size, dtype=np.int64)
        n = self.code.n
        for s, pos in self.entries.items():
            valid[s] = True
            flips[s] = sum(1 << (n - 1 - p) for p in pos)
            weight[s] = len(pos)
        return valid, flips, weight

    @cached_property
    def _chunk_tables(self) -> list[np.ndarray]:
        # syndrome contribution of each byte of the received word, low byte first
        n, cols = self.code.n, self.code.columns
        tables = []
        for c in range((n + 7) // 8):
            tab = np.zeros(256, dtype=np.int64)
            for byte in range(256):
                s = 0
                for b in range(8):
                    pos = n - 1 - (8 * c + b)
                    if pos >= 0 and (byte >> b) & 1:
                        s ^= cols[pos]
                tab[byte] = s
            tables.append(tab)
        return tables

    def syndromes(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        s = np.zeros(words.shape, dtype=np.int64)
        for c, tab in enumerate(self._chunk_tables):
            s ^= tab[(words >> (8 * c)) & 0xFF]
        return s

    def decode_many(self, words: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorised decode of integer words.

        Returns ``(accepted, messages, corrected_weight)``; messages of
        rejected words are meaningless and should be masked out.
        """
        words = np.asarray(words, dtype=np.int64)
        if words.size and (words.min() < 0 or words.max() >= (1 << self.code.n)):
            raise ValueError(f"words must have at most {self.code.n} bits")
        valid, flips, weight = self._lookup
        s = self.syndromes(words)
        accepted = valid[s]
        corrected = words ^ flips[s]
        return accepted, corrected >> self.code.m, weight[s]

    def dump(self) -> str:
        hex_width = max(1, (self.code.m + 3) // 4)
        lines = [f"# code={self.code.name} entries={len(self.entries)} "
                 f"base={self.n_base} extension={self.n_extension}"]
        for s in sorted(self.entries):
            pos = ",".join(str(p) for p in self.entries[s])
            lines.append(f"{s:0{hex_width}x}: {pos}")
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.dump())


def _pattern_syndrome(code: LinearCode, positions: tuple[int, ...]) -> int:
    s = 0
    for p in positions:
        s ^= code.columns[p]
    return s


def build_syndrome_table(code: LinearCode) -> SyndromeTable:
    """Enumerate weight ``1..t`` patterns (first seen wins), then adopt
    weight ``t+1`` patterns whose syndrome has exactly one such candidate."""
    entries: dict[int, tuple[int, ...]] = {0: ()}
    for w in range(1, code.t + 1):
        for idx in combinations(range(code.n), w):
            s = _pattern_syndrome(code, idx)
            if s not in entries:
                entries[s] = idx
    n_base = len(entries)
    ext: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    for idx in combinations(range(code.n), code.t + 1):
        s = _pattern_syndrome(code, idx)
        if s not in entries:
            ext[s].append(idx)
    for s, cands in ext.items():
        if len(cands) == 1:
            entries[s] = cands[0]
    return SyndromeTable(code, entries, n_base)


def _as_int(v: str | int, width: int, what: str) -> int:
    if isinstance(v, str):
        if len(v) != width:
            raise ValueError(f"{what} must have {width} bits, got {len(v)}")
        return bits_to_int(v)
    v = int(v)
    if v < 0 or v >= (1 << width):
        raise ValueError(f"{what} must fit in {width} bits")
    return v


def decode(table: SyndromeTable, v: str | int) -> DecodeResult:
    code = table.code
    word = _as_int(v, code.n, "received word")
    s = code.syndrome(word)
    flips = table.entries.get(s)
    if flips is None:
        return DecodeResult(Verdict.REJECTED, None, 0)
    for p in flips:
        word ^= 1 << (code.n - 1 - p)
    return DecodeResult(Verdict.ACCEPTED, int_to_bits(word >> code.m, code.k), len(flips))


def encode_message(code: LinearCode, x: str | int) -> str:
    return int_to_bits(code.encode(_as_int(x, code.k, "message")), code.n)


def load_table_dump(text: str) -> dict[int, tuple[int, ...]]:
    out = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        key, _, rest = ln.partition(":")
        rest = rest.strip()
        out[int(key, 16)] = tuple(int(p) for p in rest.split(",")) if rest else ()
    return out
