"""
Command-line entry point: python -m xfam <command> ...

Exit status: 0 ok, 1 precondition or guard failure, 2 malformed input,
3 bound/oracle mismatch in verify.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import config
from .bounds import theorem_bound
from .compress import left_compress_passes
from .core import Instance, RankSet, l_initial
from .errors import FormatError, ParameterError, XfamError
from .extremal import ExtremalKind, classify, complementary_choice, construct_extremal
from .formats import (
    format_family,
    format_tuple,
    parse_grid_spec,
    parse_instance,
    parse_instances,
    parse_ranks,
    read_family,
    read_tuple,
    write_text,
)
from .genset import FamilyTuple, cell, extent, generating_family
from .oracle import exhaustive_oracle, instance_grid, linitial_oracle, verify_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3

GRID_HELP = """\
grid: either a file with one instance per line ("n=6 ranks=3;2", optional
"t=2"), or an inline range "n=5..8 m=2 maxk=4 [shape=subsets|singleton]"
covering every m-tuple of rank sets inside {1..maxk} with n >= k1 + k2.
"""


def _emit(args, payload, human: str) -> None:
    if args.json:
        if hasattr(payload, "model_dump_json"):
            print(payload.model_dump_json(indent=2))
        else:
            print(json.dumps(payload, indent=2))
    else:
        print(human)


def _rank_set(text: str) -> RankSet:
    ranks = parse_ranks(text)
    if len(ranks) != 1:
        raise FormatError(f"expected a single rank set, got {text!r}")
    return ranks[0]


def cmd_bound(args) -> int:
    report = theorem_bound(args.n, parse_instance(args.n, args.ranks).ranks)
    lines = [f"📐 {report.instance}", f"   star total: {report.star_total}"]
    for c in report.candidates:
        lines.append(f"   gamma={c.gamma} k_min={c.k_min}: {c.value}")
    lines.append(f"   maximum: {report.maximum} ({', '.join(report.argmax)})")
    if report.predicted_cases:
        lines.append(f"   equality cases: {', '.join(report.predicted_cases)}")
    if not report.valid:
        lines.append("   ⚠️  n < k1 + k2: bound not asserted")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = parse_instance(args.n, args.ranks, args.t)
    if args.method == "linitial":
        result = linitial_oracle(instance, max_n=args.max_n)
    else:
        result = exhaustive_oracle(instance, max_layer=args.max_layer)
    lines = [
        f"🔎 {result.instance} [{result.method}]",
        f"   maximum: {result.maximum}",
        f"   profile: {result.witness_profile}",
        f"   nodes: {result.stats.nodes}, {result.stats.elapsed_ms:.1f} ms",
    ]
    _emit(args, result, "\n".join(lines))
    return EXIT_OK


def _grid(text: str) -> list[Instance]:
    path = Path(text)
    if path.is_file():
        return parse_instances(path.read_text(encoding="utf-8"))
    grid = parse_grid_spec(text)
    return instance_grid(grid.n_values, grid.m, grid.max_k, singleton=grid.singleton)


def cmd_verify(args) -> int:
    report = verify_sweep(_grid(args.grid), workers=args.workers, max_n=args.max_n)
    lines = []
    for row in report.rows:
        if row.skipped:
            lines.append(f"⏭️  {row.instance}: {row.skipped}")
            continue
        line = f"{row.instance}: oracle {row.oracle_max}, bound {row.bound_max}"
        if row.equal:
            lines.append(f"✅ {line}, case {','.join(row.classified_case)}")
        else:
            lines.append(f"❌ {line}, gap {row.oracle_max - row.bound_max:+d}")
    lines.append(
        f"{len(report.rows)} instances, {report.mismatches} mismatches, "
        f"{report.skipped} skipped, {report.errors} errors"
    )
    _emit(args, report, "\n".join(lines))
    if report.mismatches:
        return EXIT_MISMATCH
    return EXIT_PRECONDITION if report.errors else EXIT_OK


def _params(tokens: Sequence[str]) -> dict[str, str]:
    out = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            raise FormatError(f"parameter {token!r} is not key=value")
        out[key] = value
    return out


def _int(params: dict[str, str], key: str) -> int:
    if key not in params:
        raise ParameterError(f"missing parameter {key}=")
    try:
        return int(params[key])
    except ValueError as e:
        raise FormatError(f"{key}={params[key]!r} is not an integer") from e


def cmd_construct(args) -> int:
    kind = ExtremalKind(args.kind)
    p = _params(args.params)
    n = _int(p, "n")
    if kind in (ExtremalKind.STAR, ExtremalKind.M1, ExtremalKind.M2):
        kwargs = {"n": n, "ranks": _rank_set(p.get("ranks", ""))}
        if kind is not ExtremalKind.STAR:
            kwargs["k"] = _int(p, "k")
        family = construct_extremal(kind, **kwargs)
        text = format_family(family, comment=f"{kind.value} {' '.join(args.params)}")
    elif kind is ExtremalKind.CASE_III:
        k1, k2 = _int(p, "k1"), _int(p, "k2")
        if "in" in p:
            f2 = read_family(p["in"])
        else:
            f2 = l_initial(n, k2, _int(p, "s"))
        result = construct_extremal(kind, n=n, k1=k1, k2=k2, f2=f2)
        text = format_tuple(result.families)
    else:
        k, m = _int(p, "k"), _int(p, "m")
        family = read_family(p["in"]) if "in" in p else complementary_choice(k)
        result = construct_extremal(kind, n=n, k=k, m=m, family=family)
        text = format_tuple(result.families)
    if args.out:
        write_text(args.out, text)
        print(f"✅ wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_compress(args) -> int:
    family = read_family(args.input)
    compressed, passes = left_compress_passes(family)
    logger.info(f"compressed {len(family)} sets in {passes} passes")
    text = format_family(compressed)
    if args.out:
        write_text(args.out, text)
        print(f"✅ wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_genset(args) -> int:
    family = read_family(args.input)
    ranks = _rank_set(args.ranks)
    gens = generating_family(family, ranks)
    payload = {
        "generators": gens.generators.to_lists(),
        "extent": extent(gens) if len(gens) else None,
        "cells": [
            {"generator": list(e.members), "size": len(cell(e, ranks, family.n))}
            for e in gens
            if len(e)
        ],
    }
    lines = [f"🧬 {len(gens)} generators, extent {payload['extent']}"]
    lines.extend(f"   {c['generator']}: cell of {c['size']} sets" for c in payload["cells"])
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    instance = parse_instance(args.n, args.ranks)
    families = read_tuple(args.input)
    if len(families) != instance.m:
        raise FormatError(f"read {len(families)} families, ranks name {instance.m}")
    result = classify(FamilyTuple.of(instance, families), instance)
    human = f"🏷️  {instance}: case {result.case}"
    if result.gamma is not None:
        human += f" (gamma={result.gamma})"
    _emit(args, result, human)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xfam",
        description="Cross-intersecting set families: bounds, oracles, constructions.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str, **kwargs) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, **kwargs)
        p.add_argument("--json", action="store_true", help="print JSON instead of a table")
        p.set_defaults(handler=handler)
        return p

    p = add("bound", cmd_bound, "closed-form maximum for an instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ranks", required=True, help='rank sets, e.g. "3;2" or "3,1;2"')

    p = add("oracle", cmd_oracle, "maximize by search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ranks", required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--method", choices=["linitial", "exhaustive"], default="linitial")
    p.add_argument("--max-n", type=int, default=None, help=f"L-initial guard (default {config.MAX_N})")
    p.add_argument(
        "--max-layer", type=int, default=None, help=f"exhaustive guard (default {config.MAX_LAYER})"
    )

    p = add(
        "verify",
        cmd_verify,
        "compare oracle and bound over a grid",
        epilog=GRID_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--grid", required=True)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--max-n", type=int, default=None)

    p = add("construct", cmd_construct, "write an extremal family or tuple")
    p.add_argument("--kind", required=True, choices=[k.value for k in ExtremalKind])
    p.add_argument(
        "--params",
        nargs="+",
        required=True,
        help="key=value: n, ranks, k, k1, k2, s, m, in=<family file>",
    )
    p.add_argument("--out")

    p = add("compress", cmd_compress, "left-compress a family file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")

    p = add("genset", cmd_genset, "generating family of a monotone family")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--ranks", required=True, help='one rank set, e.g. "3,2"')

    p = add("classify", cmd_classify, "equality case of a maximal tuple")
    p.add_argument("--in", dest="input", nargs="+", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ranks", required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.INFO if args.verbose else getattr(logging, config.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except FormatError as e:
        logger.error(f"malformed input: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except XfamError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE


run = main
