"""Command-line entry point.

Exit codes: 0 when every row holds (skipped rows do not count), 1 when any
congruence or certificate fails, 2 on usage, parse or I/O errors.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence, Tuple

from .batch import FORMATS, BatchConfig, format_report, run_batch, summary_line
from .dsl import ParseError, parse_specs, serialize
from .replay import CLASSICAL_KINDS


def _prime_range(text: str) -> Tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split("..", 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _csv_list(text: str) -> Tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ids", type=_csv_list, default=None, help="comma-separated ids (default: all)")
    common.add_argument("--primes", type=_prime_range, default=(3, 50), metavar="A..B",
                        help="inclusive prime range (default 3..50)")
    common.add_argument("--db", default="builtin", help="'builtin' or a .cdb file")
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="table")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="supercong", description="Exact checks of Ramanujan-type supercongruences.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="verify congruences over a prime range")
    v.add_argument("--gamma-p", action="store_true",
                   help="also report orders of the p-adic gamma form (diagnostic only)")
    sub.add_parser("certify", parents=[common], help="check the WZ pair certificates")
    r = sub.add_parser("replay", parents=[common], help="replay the WZ proofs at each prime")
    r.add_argument("--theorem", type=int, choices=(1, 2, 3), action="append",
                   help="theorem to replay (repeatable; default all)")
    c = sub.add_parser("classics", parents=[common], help="check the classical ingredient congruences")
    c.add_argument("--kinds", type=_csv_list, default=CLASSICAL_KINDS,
                   help=f"comma-separated subset of {','.join(CLASSICAL_KINDS)}")
    p = sub.add_parser("parse", help="parse a .cdb file and print it in canonical form")
    p.add_argument("file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "parse":
        try:
            with open(args.file, encoding="utf-8") as fh:
                specs = parse_specs(fh.read())
        except OSError as exc:
            print(f"supercong: {exc}", file=sys.stderr)
            return 2
        except ParseError as exc:
            print(f"{args.file}:{exc}", file=sys.stderr)
            return 2
        sys.stdout.write(serialize(specs))
        return 0

    kwargs = dict(mode=args.command, ids=args.ids, primes=args.primes, db=args.db, fmt=args.fmt, jobs=args.jobs)
    if args.command == "verify":
        kwargs["gamma_p"] = args.gamma_p
    elif args.command == "replay" and args.theorem:
        kwargs["theorems"] = tuple(sorted(set(args.theorem)))
    elif args.command == "classics":
        kwargs["kinds"] = args.kinds
    try:
        report = run_batch(BatchConfig(**kwargs))
    except ParseError as exc:
        print(f"{args.db}:{exc}", file=sys.stderr)
        return 2
    except (OSError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"supercong: {msg}", file=sys.stderr)
        return 2

    sys.stdout.write(format_report(report, args.fmt))
    if args.fmt != "table":
        print(summary_line(report), file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
