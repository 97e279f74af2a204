"""Command-line interface: one binary, six subcommands.

Exit codes: 0 success, 1 invalid input or usage, 2 internal-consistency
failure.  Machine formats (json, csv) are schema-stable and
deterministic for a given argv and seed; pretty/table output is for
humans only.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import coloring
from .algebra import cayley_dickson_table, find_zero_divisors, table_from_signed_square
from .chisq import (CellCounts, ProbabilityVector, canonical_signed_square_8,
                    decompose, eigenbasis_from_latin_hadamard)
from .design import builtin_design_16, design_to_eigenbasis, verify_design
from .errors import InternalConsistencyError, SizeError, ValidationError
from .latin import construct_latin_square
from .power import (DistributionSpec, PowerSimConfig, preset_probability,
                    simulate_power)

__all__ = ["main", "run"]

CONSTRUCT_MAX_W = 6


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; we reserve 2 for
    internal-consistency failures, so route usage errors to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _matrix_json(arr) -> list:
    return [[int(v) for v in row] for row in np.asarray(arr)]


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_format(fmt: str, allowed: tuple[str, ...]) -> None:
    if fmt not in allowed:
        raise ValidationError(
            f"format {fmt!r} is not supported here (choose from {', '.join(allowed)})")


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from None


def _parse_probability(text: str) -> ProbabilityVector:
    if text in ("a", "b", "c"):
        return preset_probability(text)
    return ProbabilityVector(_parse_floats(text))


def _survivors_8() -> list:
    square = construct_latin_square(3)
    return [H for H in coloring.enumerate_colorings(square)
            if coloring.is_latin_hadamard(H)]


def _load_matrix(source: str | None) -> coloring.SignedLatinSquare:
    if source is None:
        return canonical_signed_square_8()
    if source.startswith("builtin:"):
        token = source.split(":", 1)[1]
        try:
            index = int(token)
        except ValueError:
            raise ValidationError(f"bad builtin matrix index {token!r}") from None
        survivors = _survivors_8()
        if not 0 <= index < len(survivors):
            raise ValidationError(
                f"builtin index must be 0..{len(survivors) - 1}, got {index}")
        return survivors[index]
    try:
        with open(source, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file {source!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"matrix file {source!r} is not valid JSON: {exc}") from None
    entries = payload.get("H") if isinstance(payload, dict) else payload
    if entries is None:
        raise ValidationError("matrix file must hold an 'H' field or a bare matrix")
    return coloring.SignedLatinSquare.from_signed_entries(entries)


def _cmd_construct(args) -> str:
    fmt = args.format or "pretty"
    _require_format(fmt, ("json", "csv", "pretty"))
    if args.w > CONSTRUCT_MAX_W:
        raise SizeError(
            f"--w is limited to {CONSTRUCT_MAX_W} "
            f"(a {2 ** args.w}x{2 ** args.w} matrix is beyond the guard)")
    square = construct_latin_square(args.w)
    if fmt == "json":
        return json.dumps({"w": square.w, "entries": _matrix_json(square.entries)}) + "\n"
    if fmt == "csv":
        header = ",".join(f"c{j}" for j in range(1, square.n + 1))
        rows = [",".join(str(int(v)) for v in row) for row in square.entries]
        return "\n".join([header] + rows) + "\n"
    width = len(str(square.n))
    return "\n".join(" ".join(f"{int(v):>{width}}" for v in row)
                     for row in square.entries) + "\n"


def _cmd_enumerate(args) -> str:
    fmt = args.format or "json"
    _require_format(fmt, ("json", "csv"))
    square = construct_latin_square(args.w)
    records = []
    for H in coloring.enumerate_colorings(square):
        valid = coloring.is_latin_hadamard(H)
        if args.valid_only and not valid:
            continue
        records.append({
            "w": square.w,
            "choices": coloring.choices_to_bitstring(H.choices),
            "H": _matrix_json(H.signed_entries()),
            "latin_hadamard": valid,
        })
    if fmt == "json":
        return json.dumps(records) + "\n"
    lines = ["w,choices,latin_hadamard,entries"]
    for rec in records:
        flat = " ".join(str(v) for row in rec["H"] for v in row)
        lines.append(f"{rec['w']},{rec['choices']},{str(rec['latin_hadamard']).lower()},{flat}")
    return "\n".join(lines) + "\n"


def _cmd_algebra(args) -> str:
    if args.from_coloring:
        table = table_from_signed_square(_load_matrix(args.from_coloring))
    else:
        if args.dim is None:
            raise ValidationError("need --dim or --from-coloring")
        table = cayley_dickson_table(int(math.log2(args.dim)))
    fmt = args.format or "pretty"
    signed = table.signs * table.indices
    if args.report == "table":
        _require_format(fmt, ("json", "pretty"))
        if fmt == "json":
            return json.dumps({"dim": table.dim, "table": _matrix_json(signed)}) + "\n"
        width = len(str(table.dim)) + 1
        return "\n".join(" ".join(f"{'+' if v > 0 else '-'}e{abs(int(v))}".rjust(width + 2)
                                  for v in row) for row in signed) + "\n"
    _require_format(fmt, ("json", "csv", "pretty"))
    divisors = list(find_zero_divisors(table))
    if fmt == "json":
        payload = [{"i": z.i, "j": z.j, "s1": z.s1, "k": z.k, "l": z.l, "s2": z.s2}
                   for z in divisors]
        return json.dumps({"dim": table.dim, "zero_divisors": payload}) + "\n"
    if fmt == "csv":
        lines = ["i,j,s1,k,l,s2"]
        lines += [f"{z.i},{z.j},{z.s1},{z.k},{z.l},{z.s2}" for z in divisors]
        return "\n".join(lines) + "\n"
    if not divisors:
        return "no zero divisors of the form (e_i +/- e_j)(e_k +/- e_l)\n"
    return "\n".join(str(z) for z in divisors) + "\n"


def _cmd_design(args) -> str:
    design = builtin_design_16()
    if sum((args.show, args.verify, args.eigenbasis)) > 1:
        raise ValidationError("--show, --verify and --eigenbasis are mutually exclusive")
    if args.eigenbasis:
        if not args.pvars:
            raise ValidationError("--eigenbasis needs --pvars with nine probabilities")
        _require_format(args.format or "json", ("json",))
        basis = design_to_eigenbasis(design, _parse_floats(args.pvars))
        return json.dumps({
            "matrix": [[float(v) for v in row] for row in basis.matrix],
            "cell_probabilities": [float(v) for v in basis.p.p],
        }) + "\n"
    if args.verify:
        _require_format(args.format or "json", ("json",))
        return json.dumps({"valid": verify_design(design), "order": design.order,
                           "num_vars": design.num_vars,
                           "type": list(design.type)}) + "\n"
    fmt = args.format or "pretty"
    _require_format(fmt, ("json", "pretty"))
    if fmt == "json":
        return json.dumps({"order": design.order, "num_vars": design.num_vars,
                           "type": list(design.type),
                           "entries": _matrix_json(design.entries)}) + "\n"
    return "\n".join(" ".join(f"{'+' if v > 0 else '-'}x{abs(int(v))}".rjust(4)
                              for v in row) for row in design.entries) + "\n"


def _cmd_decompose(args) -> str:
    _require_format(args.format or "json", ("json",))
    p = _parse_probability(args.p)
    try:
        counts = CellCounts([int(tok) for tok in args.counts.split(",")])
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {args.counts!r}") from None
    H = _load_matrix(args.matrix)
    basis = eigenbasis_from_latin_hadamard(H, p)
    result = decompose(counts, p, basis)
    return json.dumps({
        "X2": result.x2,
        "components": [float(t) for t in result.components],
        "sum_check": result.sum_check,
    }) + "\n"


def _cmd_power(args) -> str:
    fmt = args.format or "table"
    _require_format(fmt, ("table", "json", "csv"))
    p = _parse_probability(args.preset if args.preset else args.p)
    matrix = _load_matrix(args.matrix) if args.matrix else None
    cfg = PowerSimConfig(
        null=DistributionSpec.parse(args.null),
        alternative=DistributionSpec.parse(args.alt),
        p=p, n=args.n, reps=args.reps, alpha=args.alpha,
        master_seed=args.seed, matrix=matrix)
    result = simulate_power(cfg, threads=args.threads)
    if fmt == "csv":
        lines = ["statistic,rate,se"]
        lines += [f"{name},{rate!r},{se!r}" for name, rate, se in result.rows()]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps({
            "statistics": {name: rate for name, rate, _ in result.rows()},
            "standard_errors": {name: se for name, _, se in result.rows()},
            "config": {"null": str(cfg.null), "alt": str(cfg.alternative),
                       "p": [float(v) for v in p.p], "n": cfg.n,
                       "reps": cfg.reps, "alpha": cfg.alpha,
                       "seed": cfg.master_seed},
        }) + "\n"
    lines = [f"{'statistic':<10} {'rate':>8} {'se':>8}"]
    lines += [f"{name:<10} {rate:>8.4f} {se:>8.4f}" for name, rate, se in result.rows()]
    return "\n".join(lines) + "\n"


def _build_parser() -> _Parser:
    parser = _Parser(prog="latinhadamard",
                     description="Signed Latin squares, chi-square components, "
                                 "and their algebraic obstructions")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", default=None,
                        help="output format (command-dependent)")
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument("--seed", type=int, default=0,
                        help="master seed (LH_SEED env var overrides)")
    common.add_argument("--threads", type=int, default=os.cpu_count(),
                        help="worker threads where supported")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common],
                       help="build the structured Latin square")
    c.add_argument("--w", type=int, required=True, help="dimension exponent (n = 2^w)")
    c.set_defaults(func=_cmd_construct)

    e = sub.add_parser("enumerate", parents=[common],
                       help="enumerate colorings of the square")
    e.add_argument("--w", type=int, required=True)
    e.add_argument("--valid-only", action="store_true",
                   help="only emit Latin-Hadamard matrices")
    e.set_defaults(func=_cmd_enumerate)

    a = sub.add_parser("algebra", parents=[common],
                       help="multiplication tables and zero divisors")
    a.add_argument("--dim", type=int, choices=(2, 4, 8, 16, 32))
    a.add_argument("--from-coloring", default=None,
                   help="matrix file or builtin:<index> instead of --dim")
    a.add_argument("--report", choices=("table", "zero-divisors"), default="table")
    a.set_defaults(func=_cmd_algebra)

    d = sub.add_parser("design", parents=[common],
                       help="the order-16 nine-variable orthogonal design")
    d.add_argument("--show", action="store_true")
    d.add_argument("--verify", action="store_true")
    d.add_argument("--eigenbasis", action="store_true",
                   help="substitute --pvars and emit the orthonormal basis")
    d.add_argument("--pvars", default=None,
                   help="nine comma-separated variable probabilities")
    d.set_defaults(func=_cmd_design)

    dec = sub.add_parser("decompose", parents=[common],
                         help="component decomposition of observed counts")
    dec.add_argument("--p", required=True,
                     help="comma-separated probabilities or preset a|b|c")
    dec.add_argument("--counts", required=True, help="comma-separated cell counts")
    dec.add_argument("--matrix", default=None,
                     help="matrix file or builtin:<index> (default: canonical)")
    dec.set_defaults(func=_cmd_decompose)

    pw = sub.add_parser("power", parents=[common],
                        help="Monte Carlo power simulation")
    pw.add_argument("--null", default="normal:0,1",
                    help="null distribution, e.g. normal:0,1")
    pw.add_argument("--alt", required=True,
                    help="alternative distribution, e.g. normal:0,1.3 t:2 gamma:5,0.2")
    pw.add_argument("--preset", choices=("a", "b", "c"), default=None)
    pw.add_argument("--p", default=None, help="explicit probabilities if no preset")
    pw.add_argument("--n", type=int, default=200)
    pw.add_argument("--reps", type=int, default=10000)
    pw.add_argument("--alpha", type=float, default=0.05)
    pw.add_argument("--matrix", default=None,
                    help="matrix file or builtin:<index> (default: canonical)")
    pw.set_defaults(func=_cmd_power)
    return parser


def run(argv) -> int:
    """Parse argv, execute, return the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    env_seed = os.environ.get("LH_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            print(f"latinhadamard: error: LH_SEED must be an integer, got {env_seed!r}",
                  file=sys.stderr)
            return 1
    if args.command == "power":
        if not (args.preset or args.p):
            print("latinhadamard: error: power needs --preset or --p", file=sys.stderr)
            return 1
        if args.preset and args.p:
            print("latinhadamard: error: --preset and --p are mutually exclusive",
                  file=sys.stderr)
            return 1
    try:
        _emit(args.func(args), args.out)
    except ValidationError as exc:
        print(f"latinhadamard: error: {exc}", file=sys.stderr)
        return 1
    except InternalConsistencyError as exc:
        print(f"latinhadamard: internal consistency failure: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
