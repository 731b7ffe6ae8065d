"""Command line interface.

subcommands:
  compare FILE [--timeout T] [--tol E] [--mode auto|eq|bounds] [--json]
               [--transcript]
  serve [--port P] [--host H] [--timeout T]
  bench SUITE [--html OUT] [--csv OUT]

exit codes: 0 definite result, 2 inconclusive, 1 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .bench import load_suite, run_suite, to_csv, to_html
from .construction import GctError, parse_construction
from .pipeline import CompareConfig, compare_source, render_compare_text
from .service import render_document, result_document, serve_forever


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geomcompare",
        description="compare two quantities on a planar construction: exact "
                    "ratio by elimination, or certified sharp bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compare", help="compare the statement of a .gct file")
    c.add_argument("file", help="construction file (.gct)")
    c.add_argument("--timeout", type=float, default=5.0,
                   help="time limit in seconds (default 5)")
    c.add_argument("--tol", type=float, default=1e-6,
                   help="bounds tolerance (default 1e-6)")
    c.add_argument("--mode", choices=("auto", "eq", "bounds"), default="auto")
    c.add_argument("--json", action="store_true", help="structured output")
    c.add_argument("--transcript", action="store_true",
                   help="print the presolve transcript")

    s = sub.add_parser("serve", help="run the HTTP solver service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8765)
    s.add_argument("--timeout", type=float, default=5.0)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("suite", help="suite manifest (.json)")
    b.add_argument("--html", help="write a single-file HTML report")
    b.add_argument("--csv", help="write a CSV report")
    return parser


def cmd_compare(args) -> int:
    try:
        src = Path(args.file).read_text()
    except OSError as e:
        print(f"cannot read {args.file}: {e}", file=sys.stderr)
        return 1
    try:
        prog = parse_construction(src)
    except GctError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    config = CompareConfig(timeout=args.timeout,
                           tol=Fraction(args.tol).limit_denominator(10 ** 12),
                           mode=args.mode)
    result = compare_source(src, config)
    if args.json:
        print(render_document(result_document(result, prog)))
    else:
        print(render_compare_text(result, prog))
        timings = " ".join(f"{k}={v:.0f}ms"
                           for k, v in sorted(result.timings_ms.items()))
        print(f"[{timings}]")
        if args.transcript and result.transcript is not None:
            print(result.transcript.transcript)
    return 0 if result.is_definite() else 2


def cmd_serve(args) -> int:
    try:
        serve_forever(args.host, args.port, args.timeout)
    except KeyboardInterrupt:
        pass
    return 0


def cmd_bench(args) -> int:
    try:
        cases = load_suite(args.suite)
    except (OSError, KeyError, ValueError) as e:
        print(f"cannot load suite: {e}", file=sys.stderr)
        return 1
    rows = run_suite(cases)
    for row in rows:
        print(f"{row.status:8} {row.name:40} {row.result}")
    if args.csv:
        Path(args.csv).write_text(to_csv(rows))
    if args.html:
        Path(args.html).write_text(to_html(rows))
    passed = sum(1 for r in rows if r.status == "pass")
    print(f"{passed}/{len(rows)} passed")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    if args.command == "compare":
        return cmd_compare(args)
    if args.command == "serve":
        return cmd_serve(args)
    if args.command == "bench":
        return cmd_bench(args)
    return 1


if __name__ == "__main__":
    sys.exit(main())
