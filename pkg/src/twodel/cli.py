"""Command-line interface: ``twodel <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 constraint or membership violation,
3 decode failure, 4 correctability counterexample.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Sequence

from twodel import analysis
from twodel.bitseq import BitString, delete2
from twodel.construction import (
    MAX_ENUMERATION_N,
    derive_params,
    enumerate_codebook,
    header_json,
    is_member,
    read_codebook,
    select_targets,
    write_codebook,
)
from twodel.decoding import decode, oracle_decode, verify_codebook
from twodel.errors import ConstraintViolation, CorrectabilityError, DecodeFailure
from twodel.hashing import CACHE_ENV, build_hash_family

EXIT_USAGE, EXIT_CONSTRAINT, EXIT_DECODE, EXIT_COUNTEREXAMPLE = 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_code_args(sp: argparse.ArgumentParser, required: bool = True) -> None:
    sp.add_argument("--n", type=int, required=required, help="block length")
    sp.add_argument("--s", type=int, help="gap bound (default: n)")
    sp.add_argument("--construction", type=int, choices=(1, 2), default=2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help=f"hash family cache directory (overrides ${CACHE_ENV})")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    ap = _Parser(prog="twodel", description="Two-deletion-correcting codes.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("params", parents=[common], help="derive and print the code parameters")
    _add_code_args(sp)
    sp.add_argument("--no-targets", action="store_true", help="skip the exhaustive target search")

    sp = sub.add_parser("codebook", parents=[common], help="select targets and write the codebook file")
    _add_code_args(sp)
    sp.add_argument("--output", "-o", help="output path (default: stdout)")

    sp = sub.add_parser("corrupt", parents=[common], help="delete two symbols from a word")
    sp.add_argument("--word", required=True)
    sp.add_argument("--positions", type=int, nargs=2, metavar=("I1", "I2"))
    sp.add_argument("--seed", type=int, help="pick the deletion pair at random")

    sp = sub.add_parser("decode", parents=[common], help="decode a received word against a codebook file")
    sp.add_argument("--codebook", required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--oracle", action="store_true", help="use the brute-force decoder")

    sp = sub.add_parser("verify", parents=[common], help="exhaustively check two-deletion correction")
    _add_code_args(sp, required=False)
    sp.add_argument("--codebook", help="verify this codebook file instead of a fresh one")
    sp.add_argument("--oracle", action="store_true", help="cross-check every instance with the oracle")

    sp = sub.add_parser("redundancy", parents=[common], help="redundancy and rate curves as CSV")
    sp.add_argument("--n-min", type=int, default=1 << 10)
    sp.add_argument("--n-max", type=int, default=1 << 30)
    sp.add_argument("--output", "-o")

    sp = sub.add_parser("constraint-prob", parents=[common], help="Monte Carlo membership density versus the bound")
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--s", type=int, nargs="+", required=True)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    return ap


def _params(args):
    s = args.s if args.s is not None else args.n
    family = build_hash_family(s, cache_dir=args.cache_dir)
    return derive_params(args.n, s, args.construction, family)


def _open_out(path):
    return open(path, "w") if path else sys.stdout


def cmd_params(args) -> int:
    p = _params(args)
    t = None if args.no_targets or p.n > MAX_ENUMERATION_N else select_targets(p)
    print(json.dumps(header_json(p, t), sort_keys=True))
    return 0


def cmd_codebook(args) -> int:
    p = _params(args)
    t = select_targets(p)
    words = enumerate_codebook(p, t)
    fh = _open_out(args.output)
    try:
        write_codebook(fh, p, t, words)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_corrupt(args) -> int:
    x = BitString(args.word)
    if args.positions is not None and args.seed is not None:
        raise _UsageError("give --positions or --seed, not both")
    if args.positions is not None:
        pair = tuple(args.positions)
    elif args.seed is not None:
        if len(x) < 2:
            raise _UsageError("word must have length >= 2")
        pair = tuple(sorted(random.Random(args.seed).sample(range(1, len(x) + 1), 2)))
    else:
        raise _UsageError("give --positions or --seed")
    try:
        y = delete2(x, pair)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    if args.format == "json":
        print(json.dumps({"word": y.serialize(), "positions": list(pair)}))
    else:
        print(y.serialize())
    return 0


def cmd_decode(args) -> int:
    with open(args.codebook) as fh:
        p, t, _ = read_codebook(fh)
    y = BitString(args.word)
    if len(y) != p.n - 2:
        print(f"received word must have length {p.n - 2}", file=sys.stderr)
        return EXIT_CONSTRAINT
    if args.oracle:
        rec, branch = oracle_decode(y, p, t), "oracle"
    else:
        out = decode(y, p, t)
        rec, branch = out.recovered, out.branch
    if args.format == "json":
        print(json.dumps({"recovered": rec.serialize(), "branch": branch}))
    else:
        print(rec.serialize(), branch)
    return 0


def cmd_verify(args) -> int:
    if args.codebook:
        with open(args.codebook) as fh:
            p, t, words = read_codebook(fh)
        bad = [x for x in words if not is_member(x, p, t)]
        if bad:
            print(f"{bad[0].serialize()} is not a member: {is_member(bad[0], p, t).violation}", file=sys.stderr)
            return EXIT_CONSTRAINT
    else:
        if args.n is None:
            raise _UsageError("give --n or --codebook")
        p = _params(args)
        t = select_targets(p)
        words = enumerate_codebook(p, t)
    report = verify_codebook(words, p, t, with_oracle=args.oracle, stop_after=1)
    summary = {
        "n": p.n,
        "s": p.s,
        "construction": p.construction,
        "codewords": report.codewords,
        "instances": report.instances,
        "failures": len(report.failures),
        "branches": dict(sorted(report.branches.items())),
    }
    if report.failures:
        f = report.failures[0]
        summary["counterexample"] = {
            "x": f.x.serialize(), "positions": list(f.pair), "y": f.y.serialize(), "reason": f.reason,
        }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_COUNTEREXAMPLE if report.failures else 0


def cmd_redundancy(args) -> int:
    if args.n_min < 2 or args.n_max < args.n_min:
        raise _UsageError("need 2 <= n-min <= n-max")
    ns, n = [], args.n_min
    while n <= args.n_max:
        ns.append(n)
        n *= 2
    fh = _open_out(args.output)
    try:
        analysis.write_curves_csv(analysis.redundancy_curves(ns), fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_constraint_prob(args) -> int:
    rows = []
    for n in args.n:
        for s in args.s:
            est = analysis.monte_carlo_membership(n, s, args.trials, args.seed, workers=args.workers)
            bound = analysis.whole_string_bound(n, s) if s % 2 == 0 and 2 <= s <= 2 * n else None
            rows.append({
                "n": n, "s": s, "trials": est.trials, "estimate": est.value,
                "ci_low": est.low, "ci_high": est.high, "bound": bound,
            })
    if args.format == "csv":
        print(",".join(rows[0]))
        for r in rows:
            print(",".join("" if v is None else str(v) for v in r.values()))
    elif args.format == "text":
        for r in rows:
            print(f"n={r['n']} s={r['s']} estimate={r['estimate']:.6f} "
                  f"[{r['ci_low']:.6f}, {r['ci_high']:.6f}] bound={r['bound']}")
    else:
        print(json.dumps(rows))
    return 0


class _UsageError(Exception):
    pass


COMMANDS = {
    "params": cmd_params,
    "codebook": cmd_codebook,
    "corrupt": cmd_corrupt,
    "decode": cmd_decode,
    "verify": cmd_verify,
    "redundancy": cmd_redundancy,
    "constraint-prob": cmd_constraint_prob,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cache_dir:
        os.environ[CACHE_ENV] = args.cache_dir
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"twodel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CorrectabilityError as exc:
        print(f"twodel: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    except DecodeFailure as exc:
        print(f"twodel: decode failed: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except ValueError as exc:
        # ConstraintViolation and argument-range errors from the library
        print(f"twodel: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT if isinstance(exc, ConstraintViolation) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
