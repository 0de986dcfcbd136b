"""Command-line front end: counting, enumeration, moments, products, CLT
scans, and a moment-based spectral estimate."""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import clt, fock, partitions, products, spectrum

DEFAULT_COUNT_CAP = 6
DEFAULT_WORD_CAP = 12
DEFAULT_CLT_CAP = 64


class CliError(Exception):
    pass


def _default_workers() -> int:
    env = os.environ.get("BIMONO_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


# --- word parsing -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<op>L\+|L-|R\+|R-|Bl|Br|B)"
    r"\[(?P<s>[^,\]]+),(?P<t>[^,\]]+)\]"
    r"(\^(?P<pow>\d+))?$")

_OP_KIND = {"L+": "left_create", "L-": "left_annihilate",
            "R+": "right_create", "R-": "right_annihilate",
            "Bl": "left_field", "Br": "right_field"}


def parse_fock_word(text: str) -> Tuple[fock.Grid, List[fock.Letter]]:
    """Parse e.g. "B[0,1]^4" or "Bl[0,1] Br[1,2]" into a grid and a word."""
    tokens = text.split()
    if not tokens:
        raise CliError("empty word")
    parsed = []
    pos = 0
    for token in tokens:
        m = _TOKEN_RE.match(token)
        if not m:
            raise CliError(f"cannot parse token {token!r} at position {pos}")
        try:
            s = Fraction(m.group("s"))
            t = Fraction(m.group("t"))
        except (ValueError, ZeroDivisionError):
            raise CliError(f"bad interval endpoints in {token!r} at position {pos}")
        if s >= t:
            raise CliError(f"empty interval in {token!r} at position {pos}")
        power = int(m.group("pow") or 1)
        parsed.append((m.group("op"), s, t, power))
        pos += len(token) + 1

    endpoints = sorted({x for _, s, t, _ in parsed for x in (s, t)})
    grid = fock.Grid(tuple(endpoints))
    word: List[fock.Letter] = []
    for op, s, t, power in parsed:
        lo, hi = grid.span_of(s, t)
        if op == "B":
            letter: fock.Letter = (fock.IntervalOp("left_field", lo, hi),
                                   fock.IntervalOp("right_field", lo, hi))
        else:
            letter = fock.IntervalOp(_OP_KIND[op], lo, hi)
        word.extend([letter] * power)
    return grid, word


# --- output helpers -----------------------------------------------------------

def _emit(data: dict, fmt: str, text_lines: Optional[List[str]] = None) -> None:
    if fmt == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif fmt == "text" and text_lines is not None:
        for line in text_lines:
            print(line)
    else:
        print(json.dumps(data, indent=2, sort_keys=True))


def _rational_payload(value: Fraction) -> dict:
    return {"rational": str(value), "decimal": float(value)}


# --- subcommands --------------------------------------------------------------

def cmd_count(args) -> int:
    fmt = args.format
    if args.pattern is not None:
        partitions.validate_pattern(args.pattern)
        count = partitions.count_bimonotone_pp(args.pattern)
        _emit({"pattern": args.pattern, "count": str(count)}, fmt,
              [f"count({args.pattern!r}) = {count}"])
        return 0
    if args.n is None:
        raise CliError("count needs --n or --pattern")
    cap = args.cap_override if args.cap_override is not None else DEFAULT_COUNT_CAP
    if args.n > cap:
        raise CliError(
            f"all-pattern count for n={args.n} exceeds the cap {cap}; growth "
            f"is factorial, pass --cap-override to proceed anyway")
    if args.per_pattern:
        table = {"".join(p): partitions.count_bimonotone_pp("".join(p))
                 for p in itertools.product("lr", repeat=2 * args.n)}
        _emit({"n": args.n, "table": partitions.count_table_to_json(table),
               "total": str(sum(table.values()))}, fmt,
              [f"{k} {v}" for k, v in sorted(table.items())])
        return 0
    count = partitions.count_bimonotone_all(args.n, workers=args.workers)
    _emit({"n": args.n, "count": str(count)}, fmt, [str(count)])
    return 0


def cmd_enumerate(args) -> int:
    if args.pattern is not None:
        partitions.validate_pattern(args.pattern)
        items = [partitions.ordered_two_faced_to_json(p)
                 for p in partitions.enumerate_bimonotone_orderings(args.pattern)]
        _emit({"pattern": args.pattern, "partitions": items}, args.format,
              [json.dumps(it) for it in items])
        return 0
    if args.m is None:
        raise CliError("enumerate needs --pattern or --m")
    items = [partitions.partition_to_json(blocks)
             for blocks in partitions.enumerate_pair_partitions(args.m)]
    _emit({"m": args.m, "pair_partitions": items}, args.format,
          [json.dumps(it) for it in items])
    return 0


def cmd_moment(args) -> int:
    grid, word = parse_fock_word(args.word)
    cap = args.cap_override if args.cap_override is not None else DEFAULT_WORD_CAP
    if len(word) > cap:
        raise CliError(
            f"word length {len(word)} exceeds the cap {cap}; pass "
            f"--cap-override to proceed anyway")
    value = fock.moment(grid, word)
    _emit({"word": args.word, **_rational_payload(value)}, args.format,
          [f"{value} ({float(value)})"])
    return 0


def cmd_product_moment(args) -> int:
    reps = []
    for path in args.rep:
        with open(path) as fh:
            reps.append(products.rep_from_json(json.load(fh)))
    word = products.parse_word(args.word)
    for factor, symbol in word:
        if not 1 <= factor <= len(reps):
            raise CliError(f"word references factor {factor}, only "
                           f"{len(reps)} rep files given")
        if symbol not in reps[factor - 1].generators:
            raise CliError(f"factor {factor} has no generator {symbol!r}")
    prod = products.ProductRep(reps)
    value = products.product_moment(prod, word)
    _emit({"word": args.word, "value": str(value)}, args.format, [str(value)])
    return 0


def _parse_cov(text: Optional[str]) -> clt.CovarianceSpec:
    if text is None:
        return clt.CovarianceSpec.ones()
    try:
        c_ll, c_lr, c_rr = (Fraction(x) for x in text.split(","))
    except ValueError:
        raise CliError("--cov expects 'c_ll,c_lr,c_rr' with rational entries")
    return clt.CovarianceSpec({("l", "l"): c_ll, ("l", "r"): c_lr,
                               ("r", "l"): c_lr, ("r", "r"): c_rr})


def cmd_clt(args) -> int:
    partitions.validate_pattern(args.pattern)
    Ns = [int(x) for x in args.Ns.split(",")] if args.Ns else [4, 8, 16]
    cap = args.cap_override if args.cap_override is not None else DEFAULT_CLT_CAP
    if max(Ns) > cap:
        raise CliError(f"N={max(Ns)} exceeds the cap {cap}; pass "
                       f"--cap-override to proceed anyway")
    cov = _parse_cov(args.cov)
    report = clt.convergence_report(args.pattern, Ns, cov, backend=args.backend)
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        _emit(report.to_json(), args.format,
              [f"N={n} value={v} error={e}" for n, v, e in report.rows])
    return 0


def cmd_spectrum(args) -> int:
    if args.max_moment % 2:
        raise CliError("--max-moment must be even")
    grid = fock.Grid((Fraction(0), Fraction(1)))
    moments = [float(fock.moment(grid, fock.brownian_word(args.pattern_face * k, 1, 1)))
               for k in range(args.max_moment + 1)]
    nodes, weights = spectrum.quadrature_from_moments(moments, args.nodes)
    reconstructed = spectrum.reconstruct_moments(nodes, weights,
                                                 min(args.max_moment,
                                                     2 * len(nodes) - 1))
    _emit({"moments": moments,
           "nodes": list(map(float, nodes)),
           "weights": list(map(float, weights)),
           "reconstructed_moments": reconstructed}, args.format,
          [f"node {x:+.6f}  weight {w:.6f}" for x, w in zip(nodes, weights)])
    return 0


def cmd_verify(args) -> int:
    """Cross-module invariant suite at desk scale; one pass/fail line each."""
    checks = []
    cov = clt.CovarianceSpec.ones()
    grid = fock.Grid((Fraction(0), Fraction(1)))

    counts = [partitions.count_bimonotone_all(n) for n in range(4)]
    checks.append(("count table n<=3", counts == [1, 4, 48, 928]))

    ok = all(math.factorial(n) * fock.moment(grid, fock.brownian_word("b" * 2 * n, 1, 1))
             == counts[n] for n in range(4))
    checks.append(("operator route n<=3", ok))

    ok = all(clt.clt_limit("".join(p), cov)
             == Fraction(partitions.count_bimonotone_pp("".join(p)),
                         math.factorial(2))
             for p in itertools.product("lr", repeat=4))
    checks.append(("clt limit = count/n! (len 4)", ok))

    checks.append(("fock adjointness", fock.adjointness_check(grid, 1, 1, 2)))

    pair = products.standard_pair_rep(cov.entries)
    checks.append(("product associativity",
                   products.associativity_check([pair, pair, pair], 3)))
    checks.append(("singleton + spreadability",
                   clt.singleton_vanishing_check(pair, 3, N=4)))

    ok = all(partitions.verify_decomposition_identity("".join(p))
             for p in itertools.product("lr", repeat=4))
    checks.append(("decomposition identity (len 4)", ok))

    failed = [name for name, passed in checks if not passed]
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
    return 1 if failed else 0


# --- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bimono",
        description="Bi-monotone pair partition counts, exact Fock space "
                    "moments, tensor-product moments, CLT scans, and a "
                    "moment-based spectral estimate.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("json", "csv", "text"),
                       default="json")
        p.add_argument("--workers", type=int, default=_default_workers())
        p.add_argument("--cap-override", type=int, default=None)

    p = sub.add_parser("count", help="count bi-monotone ordered pair partitions")
    p.add_argument("--n", type=int, default=None,
                   help="half-size for the all-pattern total")
    p.add_argument("--pattern", default=None, help="face word over {l,r}")
    p.add_argument("--per-pattern", action="store_true",
                   help="with --n, print the full pattern -> count table")
    add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", help="list partitions")
    p.add_argument("--pattern", default=None,
                   help="list bi-monotone ordered pair partitions of this pattern")
    p.add_argument("--m", type=int, default=None,
                   help="list all pair partitions of [m]")
    add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("moment", help="exact Fock vacuum expectation of a word")
    p.add_argument("word", help='e.g. "B[0,1]^4" or "Bl[0,1] Br[0,1]"')
    add_common(p)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("product-moment",
                       help="moment in the product of pointed representations")
    p.add_argument("--rep", action="append", required=True,
                   help="JSON rep file (repeat per factor)")
    p.add_argument("--word", required=True, help='e.g. "1:bl,2:br,1:bl"')
    add_common(p)
    p.set_defaults(func=cmd_product_moment)

    p = sub.add_parser("clt", help="finite-N convergence scan")
    p.add_argument("--pattern", required=True)
    p.add_argument("--Ns", default=None, help="comma-separated increasing N values")
    p.add_argument("--cov", default=None, help="c_ll,c_lr,c_rr (default all ones)")
    p.add_argument("--backend", choices=("exact", "float"), default="exact")
    add_common(p)
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("spectrum",
                       help="quadrature nodes/weights from process moments")
    p.add_argument("--max-moment", type=int, default=10)
    p.add_argument("--nodes", type=int, default=5)
    p.add_argument("--pattern-face", choices=("b", "l", "r"), default="b",
                   help="which field to take moments of (default: both faces)")
    add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run the cross-module invariant suite")
    add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
