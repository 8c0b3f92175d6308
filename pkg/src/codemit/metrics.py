"""Shot aggregation: acceptance, success rates and cross-entropy benchmarking.

Every ratio is computed from integer counts.  The exact values are kept as
``Fraction`` objects so that ``ps == (A / 100) * ps_acc`` holds exactly, and
the float properties are derived from them.  Quantities with an empty
denominator are reported as NaN together with an explicit ``*_defined`` flag.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .decoding import SyndromeTable

NAN = float("nan")


def _as_values(shots, width: int | None) -> tuple[np.ndarray, int]:
    """Integer outcomes plus their bit width from strings, records or ints."""
    if isinstance(shots, np.ndarray) and shots.dtype.kind in "iu":
        if width is None:
            raise ValueError("integer shot arrays need an explicit width")
        return shots.astype(np.int64, copy=False), width
    strings = [getattr(s, "raw", s) for s in shots]
    if not strings:
        return np.zeros(0, dtype=np.int64), (width or 0)
    if isinstance(strings[0], (int, np.integer)):
        if width is None:
            raise ValueError("integer shots need an explicit width")
        return np.asarray(strings, dtype=np.int64), width
    lengths = {len(s) for s in strings}
    if len(lengths) != 1:
        raise ValueError(f"shots have mixed bit lengths {sorted(lengths)}")
    w = lengths.pop()
    if width is not None and w != width:
        raise ValueError(f"shots have {w} bits, expected {width}")
    return np.array([int(s, 2) for s in strings], dtype=np.int64), w


@dataclass(frozen=True)
class GroverMetrics:
    n_total: int
    n_accepted: int
    n_correct: int

    def __post_init__(self):
        if not 0 <= self.n_correct <= self.n_accepted <= self.n_total:
            raise ValueError("counts must satisfy 0 <= correct <= accepted <= total")
        if self.n_total == 0:
            raise ValueError("no shots to aggregate")

    @property
    def acceptance_exact(self) -> Fraction:
        return Fraction(100 * self.n_accepted, self.n_total)

    @property
    def ps_acc_exact(self) -> Fraction | None:
        if self.n_accepted == 0:
            return None
        return Fraction(self.n_correct, self.n_accepted)

    @property
    def ps_exact(self) -> Fraction:
        return Fraction(self.n_correct, self.n_total)

    @property
    def A(self) -> float:
        return float(self.acceptance_exact)

    @property
    def ps_acc_defined(self) -> bool:
        return self.n_accepted > 0

    @property
    def ps_acc(self) -> float:
        v = self.ps_acc_exact
        return NAN if v is None else float(v)

    @property
    def ps(self) -> float:
        return float(self.ps_exact)

    def identity_holds(self) -> bool:
        """``ps == A/100 * ps_acc`` in exact arithmetic (trivially true when nothing was accepted)."""
        if self.ps_acc_exact is None:
            return self.n_correct == 0
        return self.ps_exact == self.acceptance_exact / 100 * self.ps_acc_exact


def aggregate_grover(shots, table: SyndromeTable | None, target: str, *,
                     width: int | None = None) -> GroverMetrics:
    """Count accepted and correct shots.

    Without a table every shot is a raw k-bit answer and counts as accepted.
    With a table each n-bit shot is decoded first and only accepted shots
    whose recovered message equals ``target`` are correct.
    """
    k = len(target)
    want = int(target, 2)
    expected = k if table is None else table.code.n
    values, w = _as_values(shots, width if width is not None else expected)
    if w != expected:
        raise ValueError(f"shots have {w} bits but this mode expects {expected}")
    if table is not None and table.code.k != k:
        raise ValueError(f"target has {k} bits but the code carries {table.code.k}")
    total = len(values)
    if table is None:
        return GroverMetrics(total, total, int(np.count_nonzero(values == want)))
    accepted, messages, _ = table.decode_many(values)
    n_acc = int(np.count_nonzero(accepted))
    n_ok = int(np.count_nonzero(accepted & (messages == want)))
    return GroverMetrics(total, n_acc, n_ok)


@dataclass(frozen=True)
class XebResult:
    raw_xeb: float
    s_ideal: float
    n_samples_used: int

    @property
    def f_defined(self) -> bool:
        return self.s_ideal != 0 and self.n_samples_used > 0

    @property
    def f(self) -> float:
        return self.raw_xeb / self.s_ideal if self.f_defined else NAN


def self_xeb(p_ideal: np.ndarray) -> float:
    p = np.asarray(p_ideal, dtype=float)
    s = len(p) * float(np.dot(p, p)) - 1.0
    # a flat distribution gives 0 up to rounding; treat it as exactly zero
    return 0.0 if abs(s) < 1e-12 else s


def _check_distribution(p_ideal) -> tuple[np.ndarray, int]:
    p = np.asarray(p_ideal, dtype=float)
    k = int(len(p)).bit_length() - 1
    if len(p) != 1 << k:
        raise ValueError(f"ideal distribution length {len(p)} is not a power of two")
    if abs(p.sum() - 1.0) > 1e-8:
        raise ValueError(f"ideal distribution sums to {p.sum()!r}")
    return p, k


def xeb(samples, p_ideal) -> XebResult:
    p, k = _check_distribution(p_ideal)
    values, _ = _as_values(samples, k)
    if len(values) == 0:
        raise ValueError("xeb needs at least one sample")
    raw = (1 << k) * float(p[values].mean()) - 1.0
    return XebResult(raw, self_xeb(p), len(values))


def xeb_decoded(raw_values: np.ndarray, table: SyndromeTable, p_ideal,
                accepted_only: bool = True) -> XebResult:
    """XEB of n-bit encoded shots after decoding.

    By default rejected shots are dropped.  With ``accepted_only=False`` they
    contribute their leading k bits unchanged, which is useful for checking
    how much the post-selection itself matters.
    """
    p, k = _check_distribution(p_ideal)
    if table.code.k != k:
        raise ValueError(f"code carries {table.code.k} bits but the distribution has {k}")
    accepted, messages, _ = table.decode_many(np.asarray(raw_values, dtype=np.int64))
    if accepted_only:
        used = messages[accepted]
    else:
        shift = table.code.n - k
        used = np.where(accepted, messages, np.asarray(raw_values) >> shift)
    if len(used) == 0:
        return XebResult(NAN, self_xeb(p), 0)
    return XebResult((1 << k) * float(p[used].mean()) - 1.0, self_xeb(p), len(used))


def delta_f(mitigated: XebResult, unmitigated: XebResult) -> float:
    """``f_mit - f_unmit``; NaN when either side is undefined."""
    if not (mitigated.f_defined and unmitigated.f_defined):
        return NAN
    return mitigated.f - unmitigated.f


def seed_summary(values: Iterable[float]) -> tuple[float, float, int]:
    """Mean, sample standard deviation and count of the defined values."""
    vals = [v for v in values if not math.isnan(v)]
    if not vals:
        return NAN, NAN, 0
    spread = statistics.stdev(vals) if len(vals) > 1 else 0.0
    return statistics.fmean(vals), spread, len(vals)


__all__ = [
    "GroverMetrics", "XebResult", "aggregate_grover", "xeb", "xeb_decoded",
    "delta_f", "self_xeb", "seed_summary",
]
