"""``verify``: run named suites and print deterministic reports."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .crossed_modules import ModelError
from .relative_tensor import SpanCapExceeded
from .suites import SUITES, Config, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 already; keep the message terse
        self.print_usage(sys.stderr)
        print(f"verify: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _join_negative_values(argv: List[str]) -> List[str]:
    """``--c -2/1`` would read ``-2/1`` as a flag; rewrite it as ``--c=-2/1``."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--c", "--seed", "--n", "--degree-bound") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            try:
                Fraction(argv[i + 1])
            except (ValueError, ZeroDivisionError):
                pass
            else:
                out.append(f"{tok}={argv[i + 1]}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="verify", description="Exact verification suites for infinitesimal 2-braidings.")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--degree-bound", type=int, default=6, help="letters x^m enumerated for m <= bound")
    p.add_argument("--n", type=int, default=4, help="number of points for the KZ suites")
    p.add_argument("--c", type=_rational, default=Fraction(-2), help="c as a multiple of 1 (rational, e.g. -2/1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle", choices=("rewrite", "span", "both"), default=None,
                   help="equality oracle in U^(n) (default: both for n <= 3, else rewrite)")
    p.add_argument("--report", choices=("json", "text"), default="text")
    p.add_argument("--model", default=None, help="JSON model file (default: built-in String model)")
    p.add_argument("--timings", action="store_true", help="include elapsed_ms (makes output nondeterministic)")
    return p


def format_text(report) -> str:
    lines = [f"suite {report.suite}  " + "  ".join(f"{k}={v}" for k, v in report.config.items())]
    for c in report.checks:
        t = f"  {c.elapsed_ms}ms" if c.elapsed_ms is not None else ""
        lines.append(f"{c.status.upper():5} {c.id}  defects={c.defect_term_count}  [{c.paper_ref}]{t}")
    if report.error:
        lines.append(f"ERROR {report.error}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    if args.degree_bound < 0 or args.n < 2:
        print("verify: error: --degree-bound must be >= 0 and --n >= 2", file=sys.stderr)
        return EXIT_USAGE
    config = Config(args.degree_bound, args.n, args.c, args.seed, args.oracle, args.model, args.timings)
    try:
        report = run_suite(args.suite, config)
    except ModelError as exc:
        print(f"verify: model error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpanCapExceeded as exc:
        print(f"verify: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    if args.report == "json":
        print(json.dumps(report.as_dict(), indent=2, sort_keys=False))
    else:
        print(format_text(report))
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
