"""Command-line interface: ``transitivity classify|hitting-set|corpus|lattice``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .classify import DEFAULT_GRID, DEFAULT_SCALE, classify
from .core import GridScale, TransitivityError, WitnessScale, epset_classify, parse_property
from .corpus import corpus_entries, export_corpus, run_corpus
from .lattice import edge_ledger
from .sft import hitting_set
from .systems import (
    DescriptorValidationError,
    ParseError,
    build_system,
    parse_rational,
    parse_system_file,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_scale(text: str | None) -> WitnessScale:
    if not text:
        return DEFAULT_SCALE
    fields = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("ell", "L", "H", "K"):
            raise UsageError(f"bad scale component {part!r}; expected ell=,L=,H=,K=")
        try:
            fields[key] = int(value)
        except ValueError:
            raise UsageError(f"scale component {key} must be an integer") from None
    base = DEFAULT_SCALE
    try:
        return WitnessScale(**{k: fields.get(k, getattr(base, k)) for k in ("ell", "L", "H", "K")})
    except ValueError as e:
        raise UsageError(str(e)) from None


def parse_grid(text: str | None, horizon: int | None) -> GridScale:
    eps = DEFAULT_GRID.eps
    if text:
        key, sep, value = text.partition("=")
        if key.strip() != "eps" or not sep:
            raise UsageError("grid must look like eps=p/q")
        try:
            eps = parse_rational(value)
        except ValueError as e:
            raise UsageError(str(e)) from None
    try:
        return GridScale(Fraction(eps), horizon if horizon is not None else DEFAULT_GRID.horizon)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return build_system(parse_system_file(text))


def _emit(text: str) -> None:
    sys.stdout.write(text)


def cmd_classify(args) -> int:
    system = _load(args.file)
    try:
        props = [parse_property(p) for p in args.props.split(",")] if args.props else None
    except ValueError as e:
        raise UsageError(str(e)) from None
    report = classify(system, props, parse_scale(args.scale), parse_grid(args.grid, args.horizon))
    _emit(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_FAIL if report.contradictions else EXIT_OK


def cmd_hitting_set(args) -> int:
    system = _load(args.file)
    if system.graph is None:
        raise UsageError("hitting sets are computed for finite-type systems only")
    g = system.graph
    u, v = g.alphabet.encode(args.u), g.alphabet.encode(args.v)
    s = hitting_set(g, u, v)
    payload = {
        "u": args.u, "v": args.v, "set": s.to_dict(), "description": s.describe(),
        "class": epset_classify(s).value, "members": s.members(args.max_n),
    }
    if args.format == "json":
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        _emit(f"N([{args.u}], [{args.v}]) = {payload['description']}  ({payload['class']})\n"
              f"members <= {args.max_n}: {payload['members']}\n")
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.action == "list":
        for e in corpus_entries():
            exp = ", ".join(f"{p.value}={x.value.value}" for p, x in e.expected.items())
            _emit(f"{e.id:<16} {e.title}\n{'':<16} expects {exp}\n")
        return EXIT_OK
    if args.action == "export":
        for p in export_corpus(args.dir):
            _emit(f"{p}\n")
        return EXIT_OK
    scale = parse_scale(args.scale) if args.scale else None
    grid = parse_grid(args.grid, args.horizon) if (args.grid or args.horizon) else None
    only = args.only.split(",") if args.only else None
    report = run_corpus(scale, grid, only)
    if args.format == "json":
        _emit(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    else:
        _emit(report.to_text())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_lattice(args) -> int:
    if args.action == "edges":
        for e in edge_ledger():
            _emit(f"{e}  -- {e.citation}\n")
        return EXIT_OK
    if not args.file:
        raise UsageError("lattice explain needs a system file")
    system = _load(args.file)
    report = classify(system, None, parse_scale(args.scale), parse_grid(args.grid, args.horizon))
    for row in report.rows:
        v = row.verdict
        line = f"{row.prop.value:<17} {v.status.value:<16} {row.citation()}"
        if not v.provenance.direct:
            line += f" (from {', '.join(v.provenance.source) or 'system flags'})"
        _emit(line + "\n")
        if row.shadowed is not None:
            sh = row.shadowed
            _emit(f"{'':<17} also {sh.status.value} via {sh.provenance.rule} "
                  f"(from {', '.join(sh.provenance.source) or 'system flags'})\n")
    for c in report.contradictions:
        _emit(f"CONTRADICTION {c}\n")
    return EXIT_FAIL if report.contradictions else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="transitivity",
                                 description="Classify dynamical systems by transitivity-type properties.")
    sub = ap.add_subparsers(dest="command", required=True)

    def scales(p):
        p.add_argument("--scale", help="witness scale, e.g. ell=2,L=24,H=32,K=8")
        p.add_argument("--grid", help="interval grid, e.g. eps=1/64")
        p.add_argument("--horizon", type=int, help="iteration horizon for interval maps")

    p = sub.add_parser("classify", help="classify a system file")
    p.add_argument("file")
    p.add_argument("--props", help="comma-separated property ids")
    scales(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hitting-set", help="hitting-time set N([u],[v]) of a finite-type system")
    p.add_argument("file")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--max-n", type=int, default=30)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_hitting_set)

    p = sub.add_parser("corpus", help="built-in example systems")
    p.add_argument("action", choices=("list", "run", "export"), nargs="?", default="list")
    p.add_argument("--only", help="comma-separated entry ids (run)")
    p.add_argument("--dir", default="corpus", help="output directory (export)")
    scales(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("lattice", help="implication lattice")
    p.add_argument("action", choices=("explain", "edges"))
    p.add_argument("file", nargs="?")
    scales(p)
    p.set_defaults(func=cmd_lattice)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DescriptorValidationError, UsageError) as e:
        code = getattr(e, "code", "USAGE_ERROR")
        print(f"error [{code}]: {e}", file=sys.stderr)
        return EXIT_PARSE
    except TransitivityError as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
