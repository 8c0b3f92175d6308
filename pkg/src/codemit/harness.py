"""Experiment orchestration: configs, the five studies, CSV rows and summaries.

A run is a grid of (code, noise point, depth, seed) points.  At every point
the baseline and the mitigated circuit are sampled with the *same* base seed,
namely the seed itself, so shot ``i`` of both arms draws from one counter
stream and arm differences are not seeding artifacts.  Sharing the seed
across noise points as well makes sweeps smoother at no cost to validity.
"""
from __future__ import annotations

import csv
import io
import math
import re
import sys
import time
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .angles import IqpAngles, default_angles, load_angles
from .circuit import (Circuit, build_encoded_grover, build_encoded_iqp, build_grover,
                      build_iqp, optimal_grover_iterations)
from .codes import CodeError, LinearCode, resolve_code
from .decoding import SyndromeTable, build_syndrome_table
from .lowering import MCZ_MODES, cost_report, lower_to_native
from .metrics import aggregate_grover, delta_f, seed_summary, xeb, xeb_decoded
from .noise import NoiseModel, parse_probability
from .sim.engine import ideal_distribution, sample_raw
from .sim.statevector import check_width

try:  # Python 3.11+
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as _toml

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Scenario:
    family: str  # "grover" or "iqp"
    codes: tuple[str, ...]
    p2q: tuple[float, ...]
    layers: tuple[int, ...] = ()


SCENARIOS: dict[str, Scenario] = {
    "grover-noise-sweep": Scenario("grover", ("[13,7,3]",), (8e-4, 4e-4, 2e-4, 1e-4)),
    "code-strength": Scenario("grover", ("[13,7,3]", "[15,7,5]"), (4e-4,)),
    "parity-budget": Scenario("grover", ("[11,7,3]", "[13,7,3]", "[15,7,3]", "[17,7,3]"), (4e-4,)),
    "iqp-depth": Scenario("iqp", ("[13,7,3]", "[17,11,3]"), (4e-4,), (1, 5, 10, 20, 30)),
    "iqp-noise": Scenario("iqp", ("[17,11,3]",), (1e-4, 2e-4, 4e-4, 8e-4), (5, 10, 15, 20, 25)),
}

DESK_BUDGET = (400, 3)
FULL_BUDGET = {"grover": (4000, 10), "iqp": (200_000, 5)}
# rough single-core cost per shot (seconds) used only for the wall-time warning
_SHOT_COST = {"grover": 1.5e-3, "iqp": 2.5e-3}


class ConfigError(ValueError):
    """Invalid experiment configuration; ``problems`` holds one line per issue."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("\n".join(problems))


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    codes: tuple[str, ...]
    p2q: tuple[float, ...]
    shots: int
    seeds: tuple[int, ...]
    layers: tuple[int, ...] = ()
    target: str | None = None
    angles: tuple[str, ...] = ()
    mcz: str = "gray"
    out: str | None = None
    threads: int = 1
    dump_shots: str | None = None
    timestamp: bool = True
    paper_scale: bool = False
    xeb_accepted_only: bool = True

    @property
    def family(self) -> str:
        return SCENARIOS[self.scenario].family


_KEYS = {f.name for f in fields(ExperimentConfig)} | {"k"}


def _key_lines(text: str) -> dict[str, int]:
    lines = {}
    for i, line in enumerate(text.splitlines(), start=1):
        m = re.match(r"\s*([A-Za-z_][\w-]*)\s*=", line)
        if m and m.group(1) not in lines:
            lines[m.group(1)] = i
    return lines


def read_config_file(path: str | Path) -> tuple[dict[str, Any], dict[str, int], str]:
    """Parse a TOML config; returns values, the line of each key, and the source name."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([f"{path}: cannot read config: {exc.strerror}"]) from None
    try:
        values = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise ConfigError([f"{path}: {exc}"]) from None
    return values, _key_lines(text), str(path)


def _as_list(value) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, str) and "," in value and not value.strip().startswith("["):
        return [v.strip() for v in value.split(",") if v.strip()]
    return [value]


def _code_list(value) -> list[str]:
    # "13,7,3" is one code name, not three entries
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(";") if p.strip()]
        return parts
    return [str(v) for v in value]


def _seed_list(value) -> tuple[int, ...]:
    if isinstance(value, int) and not isinstance(value, bool):
        if value < 1:
            raise ValueError("seed count must be at least 1")
        return tuple(range(1, value + 1))
    seeds = tuple(int(v) for v in _as_list(value))
    if not seeds:
        raise ValueError("seed list is empty")
    if len(set(seeds)) != len(seeds):
        raise ValueError("seed list has duplicates")
    return seeds


def build_config(values: dict[str, Any] | None = None, overrides: dict[str, Any] | None = None,
                 *, lines: dict[str, int] | None = None, source: str = "<config>") -> ExperimentConfig:
    """Merge file values with CLI overrides and validate everything at once."""
    values = dict(values or {})
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    lines = lines or {}
    problems: list[str] = []

    def where(key):
        return f"{source}:{lines[key]}" if key in lines and key not in (overrides or {}) else source

    def bad(key, msg):
        problems.append(f"{where(key)}: {key}: {msg}")

    for key in values:
        if key not in _KEYS:
            bad(key, "unknown setting")

    scenario = values.get("scenario")
    if scenario is None:
        raise ConfigError(problems + [f"{source}: scenario: required (one of {', '.join(SCENARIOS)})"])
    if scenario not in SCENARIOS:
        raise ConfigError(problems + [f"{where('scenario')}: scenario: unknown {scenario!r}; "
                                      f"choose from {', '.join(SCENARIOS)}"])
    sc = SCENARIOS[scenario]
    paper_scale = bool(values.get("paper_scale", False))
    shots_default, seeds_default = FULL_BUDGET[sc.family] if paper_scale else DESK_BUDGET

    codes = tuple(_code_list(values.get("codes", sc.codes)))
    if not codes:
        bad("codes", "no codes given")
    resolved: list[LinearCode] = []
    for name in codes:
        try:
            resolved.append(resolve_code(name))
        except (CodeError, OSError) as exc:
            bad("codes", f"{name}: {exc}")

    try:
        p2q = tuple(parse_probability(v) for v in _as_list(values.get("p2q", sc.p2q)))
        for p in p2q:
            NoiseModel.from_p2q(p)
        if not p2q:
            bad("p2q", "empty list")
    except (ValueError, TypeError) as exc:
        bad("p2q", str(exc))
        p2q = ()

    shots = values.get("shots", shots_default)
    if not isinstance(shots, int) or isinstance(shots, bool) or shots < 1:
        bad("shots", f"must be a positive integer, got {shots!r}")
    try:
        seeds = _seed_list(values.get("seeds", seeds_default))
    except (ValueError, TypeError) as exc:
        bad("seeds", str(exc))
        seeds = ()

    layers: tuple[int, ...] = ()
    if sc.family == "iqp":
        try:
            layers = tuple(int(v) for v in _as_list(values.get("layers", sc.layers)))
            if not layers or min(layers) < 0:
                bad("layers", "need one or more non-negative depths")
        except (ValueError, TypeError) as exc:
            bad("layers", str(exc))
    elif "layers" in values:
        bad("layers", f"not used by {scenario}")

    target = values.get("target")
    ks = {c.k for c in resolved}
    if "k" in values and ks and ks != {values["k"]}:
        bad("k", f"k={values['k']} does not match the codes (k={sorted(ks)})")
    if sc.family == "grover":
        if len(ks) > 1:
            bad("codes", f"Grover codes must share k, got {sorted(ks)}")
        k = next(iter(ks)) if ks else values.get("k")
        if target is None and k:
            target = "1" * k
        if target is not None:
            if not isinstance(target, str) or set(target) - {"0", "1"}:
                bad("target", f"must be a bit string, got {target!r}")
            elif k and len(target) != k:
                bad("target", f"length {len(target)} does not match k={k}")
    elif target is not None:
        bad("target", f"not used by {scenario}")

    angles = tuple(str(a) for a in _as_list(values.get("angles", ())))
    if sc.family == "iqp":
        have = {}
        for a in angles:
            try:
                have[load_angles(a).k] = a
            except (OSError, ValueError) as exc:
                bad("angles", str(exc))
        for c in resolved:
            if angles and c.k not in have:
                bad("angles", f"no angle file for k={c.k} (code {c.name})")

    mcz = values.get("mcz", "gray")
    if mcz not in MCZ_MODES:
        bad("mcz", f"must be one of {MCZ_MODES}")
    threads = values.get("threads", 1)
    if not isinstance(threads, int) or isinstance(threads, bool) or threads < 1:
        bad("threads", f"must be a positive integer, got {threads!r}")
    for key in ("timestamp", "paper_scale", "xeb_accepted_only"):
        if key in values and not isinstance(values[key], bool):
            bad(key, "must be true or false")

    if problems:
        raise ConfigError(problems)
    return ExperimentConfig(
        scenario=scenario, codes=codes, p2q=p2q, shots=shots,
        seeds=seeds, layers=layers, target=target, angles=angles, mcz=mcz,
        out=values.get("out"), threads=threads, dump_shots=values.get("dump_shots"),
        timestamp=bool(values.get("timestamp", True)), paper_scale=paper_scale,
        xeb_accepted_only=bool(values.get("xeb_accepted_only", True)),
    )


def estimated_seconds(cfg: ExperimentConfig) -> float:
    points = len(cfg.codes) * len(cfg.p2q) * max(1, len(cfg.layers)) * len(cfg.seeds)
    return points * 2 * cfg.shots * _SHOT_COST[cfg.family] / cfg.threads


# -- rows ---------------------------------------------------------------------

@dataclass
class RunRow:
    scenario: str
    code: str
    arm: str
    p2q: float
    seed: int
    shots: int
    layers: int | None = None
    n_accepted: int | None = None
    n_correct: int | None = None
    A: float | None = None
    ps_acc: float | None = None
    ps: float | None = None
    twoq_count_base: int | None = None
    twoq_count_mit: int | None = None
    raw_xeb: float | None = None
    f: float | None = None
    delta_f: float | None = None
    n_samples_used: int | None = None


CSV_COLUMNS = [f.name for f in fields(RunRow)]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "nan" if math.isnan(v) else format(v, ".10g")
    return str(v)


def rows_to_csv(rows: list[RunRow], timestamp: bool = True) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA_VERSION}\n")
    if timestamp:
        buf.write(f"# generated={datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def read_rows(text: str) -> list[dict[str, str]]:
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(body))


# -- execution ----------------------------------------------------------------

@dataclass
class _Context:
    cfg: ExperimentConfig
    progress: Callable[[str], None] | None
    samples: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)

    def note(self, msg):
        if self.progress:
            self.progress(msg)

    def table(self, code: LinearCode) -> SyndromeTable:
        if code.name not in self.tables:
            self.tables[code.name] = build_syndrome_table(code)
        return self.tables[code.name]

    def twoq(self, circuit: Circuit) -> int:
        # counts always refer to the Gray-code lowering, whatever mode is simulated
        if circuit not in self.counts:
            self.counts[circuit] = cost_report(lower_to_native(circuit, "gray")).twoq_count
        return self.counts[circuit]

    def ideal(self, circuit: Circuit) -> np.ndarray:
        if circuit not in self.ideals:
            self.ideals[circuit] = ideal_distribution(circuit, self.cfg.mcz)
        return self.ideals[circuit]

    def sample(self, circuit: Circuit, p2q: float, seed: int, tag: str) -> np.ndarray:
        key = (circuit, p2q, seed)
        if key not in self.samples:
            cfg = self.cfg
            check_width(circuit.width)
            model = NoiseModel.from_p2q(p2q)
            t0 = time.perf_counter()
            vals = sample_raw(circuit, model, cfg.shots, seed, cfg.threads, cfg.mcz)
            self.note(f"{tag} p2q={p2q:g} seed={seed}: {cfg.shots} shots "
                      f"in {time.perf_counter() - t0:.1f}s")
            if cfg.dump_shots:
                dump_shots(Path(cfg.dump_shots) / f"{_slug(tag)}_p{p2q:g}_s{seed}.txt",
                           circuit, model, seed, vals)
            self.samples[key] = vals
        return self.samples[key]


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.=-]+", "_", text).strip("_")


def dump_shots(path: Path, circuit: Circuit, model: NoiseModel, seed: int, values) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    w = circuit.width
    with open(path, "w") as fh:
        fh.write(f"# circuit={circuit.label} model={model.describe()} base_seed={seed}\n")
        for v in values:
            fh.write(format(int(v), f"0{w}b") + "\n")


def _run_grover(ctx: _Context) -> list[RunRow]:
    cfg = ctx.cfg
    codes = [resolve_code(c) for c in cfg.codes]
    k = codes[0].k
    R = optimal_grover_iterations(k)
    base = build_grover(k, cfg.target, R)
    rows = []
    for code in codes:
        table = ctx.table(code)
        mit = build_encoded_grover(code, cfg.target, R)
        nb, nm = ctx.twoq(base), ctx.twoq(mit)
        for p in cfg.p2q:
            for seed in cfg.seeds:
                common = dict(scenario=cfg.scenario, code=code.name, p2q=p, seed=seed,
                              shots=cfg.shots, twoq_count_base=nb, twoq_count_mit=nm)
                for arm, circ, tab in (("baseline", base, None), ("mitigated", mit, table)):
                    vals = ctx.sample(circ, p, seed, f"{arm} {circ.label}")
                    m = aggregate_grover(vals, tab, cfg.target, width=circ.width)
                    rows.append(RunRow(arm=arm, n_accepted=m.n_accepted, n_correct=m.n_correct,
                                       A=m.A, ps_acc=m.ps_acc, ps=m.ps, **common))
    return rows


def _angles_for(cfg: ExperimentConfig, k: int) -> IqpAngles:
    for a in cfg.angles:
        ang = load_angles(a)
        if ang.k == k:
            return ang
    return default_angles(k)


def _run_iqp(ctx: _Context) -> list[RunRow]:
    cfg = ctx.cfg
    rows = []
    for code in (resolve_code(c) for c in cfg.codes):
        k = code.k
        ang = _angles_for(cfg, k)
        table = ctx.table(code)
        for p in cfg.p2q:
            for L in cfg.layers:
                base = build_iqp(k, L, ang.theta_z, ang.theta_zz)
                mit = build_encoded_iqp(code, L, ang.theta_z, ang.theta_zz)
                ideal = ctx.ideal(base)
                nb, nm = ctx.twoq(base), ctx.twoq(mit)
                for seed in cfg.seeds:
                    common = dict(scenario=cfg.scenario, code=code.name, p2q=p, seed=seed,
                                  shots=cfg.shots, layers=L, twoq_count_base=nb, twoq_count_mit=nm)
                    xb = xeb(ctx.sample(base, p, seed, f"baseline {base.label}"), ideal)
                    mvals = ctx.sample(mit, p, seed, f"mitigated {mit.label}")
                    xm = xeb_decoded(mvals, table, ideal, cfg.xeb_accepted_only)
                    n_acc = int(np.count_nonzero(table.decode_many(mvals)[0]))
                    rows.append(RunRow(arm="baseline", n_accepted=cfg.shots, A=100.0,
                                       raw_xeb=xb.raw_xeb, f=xb.f,
                                       n_samples_used=xb.n_samples_used, **common))
                    rows.append(RunRow(arm="mitigated", n_accepted=n_acc,
                                       A=100.0 * n_acc / cfg.shots, raw_xeb=xm.raw_xeb, f=xm.f,
                                       delta_f=delta_f(xm, xb), n_samples_used=xm.n_samples_used,
                                       **common))
    return rows


def run_experiment(cfg: ExperimentConfig,
                   progress: Callable[[str], None] | None = None) -> list[RunRow]:
    ctx = _Context(cfg, progress)
    for name in cfg.codes:
        check_width(resolve_code(name).n)
    if cfg.family == "grover":
        return _run_grover(ctx)
    return _run_iqp(ctx)


# -- summaries ----------------------------------------------------------------

_SUMMARY_METRICS = {"grover": ("A", "ps_acc", "ps"), "iqp": ("A", "f", "delta_f")}


def summarize(rows: list[RunRow], family: str) -> list[dict[str, Any]]:
    """Seed mean and standard deviation per (code, p2q, layers, arm)."""
    groups: dict[tuple, list[RunRow]] = {}
    for r in rows:
        groups.setdefault((r.code, r.p2q, r.layers, r.arm), []).append(r)
    out = []
    for (code, p2q, layers, arm), rs in groups.items():
        entry: dict[str, Any] = dict(code=code, p2q=p2q, layers=layers, arm=arm, seeds=len(rs),
                                     twoq_count=rs[0].twoq_count_mit if arm == "mitigated"
                                     else rs[0].twoq_count_base)
        for metric in _SUMMARY_METRICS[family]:
            vals = [getattr(r, metric) for r in rs]
            if all(v is None for v in vals):
                continue
            mean, sd, _ = seed_summary(float(v) for v in vals if v is not None)
            entry[metric] = (mean, sd)
        out.append(entry)
    return out


def summary_text(rows: list[RunRow], cfg: ExperimentConfig) -> str:
    lines = [f"scenario {cfg.scenario}: {cfg.shots} shots x {len(cfg.seeds)} seeds, mcz={cfg.mcz}"]
    for e in summarize(rows, cfg.family):
        head = f"{e['code']:>10} {e['arm']:<9} p2q={e['p2q']:<7g}"
        if e["layers"] is not None:
            head += f" L={e['layers']:<3}"
        parts = [f"{m}={mean:.4f}±{sd:.4f}" for m, (mean, sd) in
                 ((m, e[m]) for m in _SUMMARY_METRICS[cfg.family] if m in e)]
        lines.append(f"{head} 2q={e['twoq_count']:<6} " + " ".join(parts))
    return "\n".join(lines) + "\n"


def write_outputs(rows: list[RunRow], cfg: ExperimentConfig) -> tuple[str, str]:
    """CSV text and summary text; written next to each other when ``cfg.out`` is set."""
    text = rows_to_csv(rows, cfg.timestamp)
    summary = summary_text(rows, cfg)
    if cfg.out:
        out = Path(cfg.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        out.with_name(out.name + ".summary.txt").write_text(summary)
    return text, summary


def warn_paper_scale(cfg: ExperimentConfig, stream=sys.stderr) -> None:
    hours = estimated_seconds(cfg) / 3600
    print(f"warning: full-budget run of {cfg.scenario} "
          f"({cfg.shots} shots x {len(cfg.seeds)} seeds per point) may take about "
          f"{hours:.1f} h with {cfg.threads} worker(s)", file=stream)


__all__ = [
    "ConfigError", "ExperimentConfig", "RunRow", "SCENARIOS", "build_config",
    "read_config_file", "run_experiment", "rows_to_csv", "read_rows", "summarize",
    "summary_text", "write_outputs", "warn_paper_scale",
]
