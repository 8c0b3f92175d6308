"""Frozen IQP rotation angles.

The mitigated and unmitigated IQP circuits of a study must share one angle
vector.  Angles are drawn once from a seeded uniform [0, 2*pi) generator and
checked in as plain text: a header line naming ``k`` and the seed, then the
``k`` single-qubit angles followed by the ``k(k-1)/2`` pair angles (pairs in
lexicographic order), one per line.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

DEFAULT_ANGLE_SEED = 20240611
_HEADER = re.compile(r"#\s*iqp-angles\s+k=(\d+)\s+seed=(-?\d+)\s*$")


@dataclass(frozen=True)
class IqpAngles:
    k: int
    seed: int | None
    theta_z: tuple[float, ...]
    theta_zz: tuple[float, ...]

    def __post_init__(self):
        if len(self.theta_z) != self.k or len(self.theta_zz) != self.k * (self.k - 1) // 2:
            raise ValueError(f"angle counts do not match k={self.k}")

    def dump(self) -> str:
        seed = "-1" if self.seed is None else str(self.seed)
        lines = [f"# iqp-angles k={self.k} seed={seed}"]
        lines += [repr(float(a)) for a in self.theta_z + self.theta_zz]
        return "\n".join(lines) + "\n"


def generate_angles(k: int, seed: int = DEFAULT_ANGLE_SEED) -> IqpAngles:
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.0, 2 * math.pi, size=k + k * (k - 1) // 2)
    return IqpAngles(k, seed, tuple(values[:k].tolist()), tuple(values[k:].tolist()))


def parse_angles(text: str, source: str = "<angles>") -> IqpAngles:
    lines = text.splitlines()
    if not lines:
        raise ValueError(f"{source}: empty angle file")
    m = _HEADER.match(lines[0].strip())
    if m is None:
        raise ValueError(f"{source}:1: expected '# iqp-angles k=<k> seed=<seed>'")
    k, seed = int(m.group(1)), int(m.group(2))
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ValueError(f"{source}:{lineno}: not a number: {line!r}") from None
    need = k + k * (k - 1) // 2
    if len(values) != need:
        raise ValueError(f"{source}: k={k} needs {need} angles, found {len(values)}")
    return IqpAngles(k, None if seed < 0 else seed, tuple(values[:k]), tuple(values[k:]))


def load_angles(path: str | Path) -> IqpAngles:
    path = Path(path)
    return parse_angles(path.read_text(), str(path))


def default_angles(k: int) -> IqpAngles:
    """The checked-in angles for ``k`` (generated with the default seed if none ship)."""
    res = resources.files("codemit") / "data" / f"iqp_angles_k{k}.txt"
    if res.is_file():
        return parse_angles(res.read_text(), f"iqp_angles_k{k}.txt")
    return generate_angles(k)
