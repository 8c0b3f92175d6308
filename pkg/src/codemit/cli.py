"""Command-line entry point (``codemit``)."""
from __future__ import annotations

import argparse
import sys
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from . import __version__
from .angles import default_angles, load_angles
from .circuit import (build_encoded_grover, build_encoded_iqp, build_encoder, build_grover,
                      build_iqp, optimal_grover_iterations)
from .codes import CodeError, resolve_code
from .decoding import build_syndrome_table, decode, encode_message
from .harness import (SCENARIOS, ConfigError, build_config, read_config_file, run_experiment,
                      warn_paper_scale, write_outputs)
from .lowering import MCZ_MODES, cost_report, lower_to_native
from .sim.engine import ideal_distribution
from .sim.statevector import ResourceError

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE = 0, 2, 3


class _InputError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="codemit", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one of the experiment scenarios")
    run.add_argument("--config", help="TOML file with experiment settings")
    run.add_argument("--scenario", choices=sorted(SCENARIOS))
    run.add_argument("--code", action="append", help="code name or H file (repeatable)")
    run.add_argument("--p2q", action="append",
                     help="two-qubit error rate, e.g. 4e-4 or 0.04%% (repeatable or comma list)")
    run.add_argument("--shots", type=int)
    run.add_argument("--seeds", help="seed count N (seeds 1..N) or a comma list of seeds")
    run.add_argument("--layers", help="comma list of IQP depths")
    run.add_argument("--target", help="Grover marked string (default all ones)")
    run.add_argument("--angles", action="append", help="IQP angle file (one per k)")
    run.add_argument("--out", help="CSV output path (summary goes next to it)")
    run.add_argument("--threads", type=int)
    run.add_argument("--mcz", choices=MCZ_MODES)
    run.add_argument("--dump-shots", metavar="DIR", help="write raw shots per run unit")
    run.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header")
    run.add_argument("--paper-scale", action="store_true",
                     help="full budgets: 4000 shots x 10 seeds (Grover), 200000 x 5 (IQP)")
    run.add_argument("--xeb-all-shots", action="store_true",
                     help="keep rejected shots (undecoded) in the mitigated XEB")
    run.add_argument("--quiet", action="store_true")

    dec = sub.add_parser("decode", help="decode measured n-bit strings")
    dec.add_argument("--code", required=True)
    dec.add_argument("--in", dest="infile", default="-", help="file of bit strings ('-' = stdin)")

    enc = sub.add_parser("encode", help="print codewords of k-bit messages")
    enc.add_argument("--code", required=True)
    enc.add_argument("messages", nargs="*")
    enc.add_argument("--in", dest="infile")

    tab = sub.add_parser("table", help="build and dump the syndrome table")
    tab.add_argument("--code", required=True)
    tab.add_argument("--out")

    cost = sub.add_parser("cost", help="gate counts of baseline and encoded circuits")
    cost.add_argument("--code", required=True)
    cost.add_argument("--circuit", choices=("grover", "iqp"), default="grover")
    cost.add_argument("--layers", type=int, default=10)
    cost.add_argument("--target")
    cost.add_argument("--angles")

    ideal = sub.add_parser("ideal", help="exact output distribution of an unencoded circuit")
    ideal.add_argument("--circuit", choices=("grover", "iqp"), default="iqp")
    ideal.add_argument("--k", type=int, required=True)
    ideal.add_argument("--layers", type=int, default=10)
    ideal.add_argument("--target")
    ideal.add_argument("--angles")
    ideal.add_argument("--top", type=int, default=10, help="print the N most likely strings")
    ideal.add_argument("--out", help="write all probabilities, one per line")
    return p


def _split(values):
    if not values:
        return None
    out = []
    for v in values:
        out.extend(x.strip() for x in v.split(",") if x.strip())
    return out


def _cmd_run(args) -> int:
    if args.config:
        values, lines, source = read_config_file(args.config)
    else:
        values, lines, source = {}, {}, "<command line>"
    seeds = None
    if args.seeds is not None:
        seeds = [int(s) for s in args.seeds.split(",")] if "," in args.seeds else int(args.seeds)
    overrides = {
        "scenario": args.scenario,
        "codes": args.code,
        "p2q": _split(args.p2q),
        "shots": args.shots,
        "seeds": seeds,
        "layers": _split([args.layers]) if args.layers else None,
        "target": args.target,
        "angles": args.angles,
        "out": args.out,
        "threads": args.threads,
        "mcz": args.mcz,
        "dump_shots": args.dump_shots,
        "timestamp": False if args.no_timestamp else None,
        "paper_scale": True if args.paper_scale else None,
        "xeb_accepted_only": False if args.xeb_all_shots else None,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    cfg = build_config(values, overrides, lines=lines, source=source)
    if cfg.paper_scale:
        warn_paper_scale(cfg)
    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr, flush=True))
    rows = run_experiment(cfg, progress)
    text, summary = write_outputs(rows, cfg)
    if cfg.out:
        print(summary, end="")
        print(f"wrote {len(rows)} rows to {cfg.out}")
    else:
        sys.stdout.write(text)
        sys.stderr.write(summary)
    return EXIT_OK


def _read_lines(path: str | None):
    """Non-empty, non-comment lines with their line numbers."""
    ctx = nullcontext(sys.stdin) if path in (None, "-") else open(path)
    with ctx as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if line and not line.startswith("#"):
                yield lineno, line


def _cmd_decode(args) -> int:
    code = resolve_code(args.code)
    table = build_syndrome_table(code)
    source = "<stdin>" if args.infile == "-" else args.infile
    for lineno, word in _read_lines(args.infile):
        if len(word) != code.n or set(word) - {"0", "1"}:
            raise _InputError(f"{source}:{lineno}: expected {code.n} bits, got {word!r}")
        res = decode(table, word)
        if res.accepted:
            print(f"{word} Accepted {res.message} corrected={res.corrected_weight}")
        else:
            print(f"{word} Rejected")
    return EXIT_OK


def _cmd_encode(args) -> int:
    code = resolve_code(args.code)
    items = [(0, m) for m in args.messages]
    if args.infile:
        items += list(_read_lines(args.infile))
    for lineno, msg in items:
        if len(msg) != code.k or set(msg) - {"0", "1"}:
            where = f"{args.infile}:{lineno}: " if lineno else ""
            raise _InputError(f"{where}expected {code.k} bits, got {msg!r}")
        print(f"{msg} {encode_message(code, msg)}")
    return EXIT_OK


def _cmd_table(args) -> int:
    table = build_syndrome_table(resolve_code(args.code))
    text = table.dump()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"{table.code.name}: entries={len(table)} base={table.n_base} "
          f"extension={table.n_extension}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def _iqp_angles(k, path):
    ang = load_angles(path) if path else default_angles(k)
    if ang.k != k:
        raise _InputError(f"{path}: angle file is for k={ang.k}, need k={k}")
    return ang


def _cmd_cost(args) -> int:
    code = resolve_code(args.code)
    k = code.k
    if args.circuit == "grover":
        target = args.target or "1" * k
        R = optimal_grover_iterations(k)
        base, mit = build_grover(k, target, R), build_encoded_grover(code, target, R)
    else:
        ang = _iqp_angles(k, args.angles)
        base = build_iqp(k, args.layers, ang.theta_z, ang.theta_zz)
        mit = build_encoded_iqp(code, args.layers, ang.theta_z, ang.theta_zz)
    print(f"encoder CNOTs: {build_encoder(code).count('cnot')}")
    print(f"added CNOTs: {mit.count('cnot') - base.count('cnot')}")
    for arm, circ in (("baseline", base), ("mitigated", mit)):
        rep = cost_report(lower_to_native(circ, "gray"))
        print(f"{arm}: {circ.label}: twoq_count={rep.twoq_count} twoq_depth={rep.twoq_depth} "
              f"noisy_1q={rep.oneq_noisy_count}")
    return EXIT_OK


def _cmd_ideal(args) -> int:
    k = args.k
    if args.circuit == "grover":
        circ = build_grover(k, args.target or "1" * k, optimal_grover_iterations(k))
    else:
        ang = _iqp_angles(k, args.angles)
        circ = build_iqp(k, args.layers, ang.theta_z, ang.theta_zz)
    p = ideal_distribution(circ)
    if args.out:
        np.savetxt(args.out, p, fmt="%.17g", header=f"{circ.label}")
    order = np.argsort(-p, kind="stable")[: args.top]
    for i in order:
        print(f"{int(i):0{k}b} {p[i]:.10g}")
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "decode": _cmd_decode, "encode": _cmd_encode,
             "table": _cmd_table, "cost": _cmd_cost, "ideal": _cmd_ideal}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        for line in exc.problems:
            print(f"config error: {line}", file=sys.stderr)
        return EXIT_CONFIG
    except (CodeError, _InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
