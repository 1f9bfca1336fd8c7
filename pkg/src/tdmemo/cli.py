"""Command line front end.

    tdmemo recognize -g GRAMMAR [-e ENGINE] WORD...
    tdmemo positions -g GRAMMAR [--as-suffixes] WORD...
    tdmemo chart     -g GRAMMAR WORD...
    tdmemo bench     -g GRAMMAR --pattern "a" --lengths 4,8,16

Exit status: 0 success (``recognize``: recognized), 1 not recognized,
2 grammar error, 3 fuel or depth exhausted, 64 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from .engines import DEFAULT_ENGINE, ENGINES, run_engine
from .grammar import GrammarError, left_recursive_nonterminals, load_grammar, tokenize
from .memo import export_chart
from .session import DepthExhausted, FuelExhausted, ResourceExhausted
from .setrec import DEFAULT_FUEL

EXIT_OK, EXIT_FALSE, EXIT_GRAMMAR, EXIT_FUEL, EXIT_USAGE = 0, 1, 2, 3, 64
BENCH_FUEL = 10**5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fuel(text: str) -> int:
    value = int(float(text)) if "e" in text.lower() else int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("fuel must be non-negative")
    return value


def _lengths(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad length list {text!r}") from None
    if not values or min(values) < 0:
        raise argparse.ArgumentTypeError("lengths must be non-negative integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-g", "--grammar", required=True, metavar="PATH")
    common.add_argument("-s", "--start", metavar="NAME", help="start symbol (default: first rule)")
    common.add_argument("--fuel", type=_fuel, default=DEFAULT_FUEL,
                        help=f"recognizer application budget (default {DEFAULT_FUEL})")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--timing", action="store_true",
                        help="include elapsed seconds in structured output")

    words = argparse.ArgumentParser(add_help=False)
    words.add_argument("-e", "--engine", choices=ENGINES, default=DEFAULT_ENGINE)
    words.add_argument("--trace", action="store_true", help="print call/delivery events to stderr")
    words.add_argument("--stdin", action="store_true", help="read words from standard input")
    words.add_argument("words", nargs="*")

    parser = _Parser(prog="tdmemo", description="Top-down recognizers with CPS memoization.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("recognize", parents=[common, words], help="print true/false")
    pos = sub.add_parser("positions", parents=[common, words],
                         help="right positions of the start symbol from 0")
    pos.add_argument("--as-suffixes", action="store_true",
                     help="print the remaining words at each position")
    sub.add_parser("chart", parents=[common, words], help="memo table as complete edges")
    bench = sub.add_parser("bench", parents=[common], help="compare engine counters")
    bench.set_defaults(fuel=BENCH_FUEL)
    bench.add_argument("--pattern", default="a", help="token pattern repeated to each length")
    bench.add_argument("--lengths", type=_lengths, default=[4, 8, 16])
    bench.add_argument("--engines", default="set,set-memo,cps,cps-memo")
    return parser


def _trace_printer(event: tuple):
    print(" ".join(str(x) for x in event), file=sys.stderr)


def _words(args) -> tuple[str, ...]:
    if args.stdin:
        return tokenize(sys.stdin.read().split() + list(args.words))
    return tokenize(args.words)


def _dump(doc):
    print(json.dumps(doc, indent=2, sort_keys=True))


def _report_doc(report, timing: bool) -> dict:
    doc = report.as_dict()
    if not timing:
        del doc["elapsed"]
    return doc


def _exhausted_message(exc: ResourceExhausted, grammar, engine: str) -> str:
    message = str(exc)
    lr = left_recursive_nonterminals(grammar)
    if lr and engine in ("set", "set-memo"):
        message += (f"; grammar is left recursive ({', '.join(sorted(lr))}) and top-down "
                    "set recognizers do not terminate on it, memoized or not: use -e cps-memo")
    return message


def cmd_recognize(args, grammar) -> int:
    report = run_engine(grammar, _words(args), args.engine, args.fuel,
                        _trace_printer if args.trace else None)
    if args.format == "structured":
        _dump(_report_doc(report, args.timing))
    else:
        print("true" if report.recognized else "false")
    return EXIT_OK if report.recognized else EXIT_FALSE


def cmd_positions(args, grammar) -> int:
    tokens = _words(args)
    report = run_engine(grammar, tokens, args.engine, args.fuel,
                        _trace_printer if args.trace else None)
    if args.format == "structured":
        doc = _report_doc(report, args.timing)
        if args.as_suffixes:
            doc["suffixes"] = [list(tokens[r:]) for r in report.right_positions]
        _dump(doc)
    elif args.as_suffixes:
        print(" ".join("(" + " ".join(tokens[r:]) + ")" for r in report.right_positions))
    else:
        print(" ".join(map(str, report.right_positions)))
    return EXIT_OK


def cmd_chart(args, grammar) -> int:
    if args.engine != "cps-memo":
        raise UsageError("chart needs the cps-memo engine")
    report = run_engine(grammar, _words(args), "cps-memo", args.fuel,
                        _trace_printer if args.trace else None)
    edges = export_chart(report.session)
    if args.format == "structured":
        _dump([{"nonterminal": a, "left": l, "right": r} for a, l, r in edges])
    else:
        for a, l, r in edges:
            print(f"{a}\t{l}\t{r}")
    return EXIT_OK


def bench_rows(grammar, pattern, lengths, engines, fuel):
    """One dict per (engine, n) with counters or the reason the run stopped."""
    rows = []
    for engine in engines:
        for n in lengths:
            tokens = tuple(itertools.islice(itertools.cycle(pattern), n)) if pattern else ()
            row = {"engine": engine, "n": n, "status": "ok", "recognized": None,
                   "evaluations": None, "deliveries": None, "fuel_used": None}
            try:
                report = run_engine(grammar, tokens, engine, fuel)
            except FuelExhausted as exc:
                row.update(status="fuel-exhausted", fuel_used=exc.fuel)
            except DepthExhausted as exc:
                row.update(status="depth-exhausted", fuel_used=exc.fuel_used)
            except GrammarError as exc:
                row.update(status="rejected", detail=str(exc))
            else:
                c = report.counters
                row.update(recognized=report.recognized, evaluations=c["evaluations"],
                           deliveries=c["deliveries"], fuel_used=c["fuel_used"])
            rows.append(row)
    return rows


def cmd_bench(args, grammar) -> int:
    engines = [e.strip() for e in args.engines.split(",") if e.strip()]
    unknown = [e for e in engines if e not in ENGINES]
    if unknown or not engines:
        raise UsageError(f"unknown engine(s): {', '.join(unknown) or '(none)'}")
    rows = bench_rows(grammar, tokenize(args.pattern), args.lengths, engines, args.fuel)
    if args.format == "structured":
        _dump(rows)
        return EXIT_OK
    header = ("engine", "n", "status", "recognized", "evaluations", "deliveries", "fuel_used")
    table = [header] + [tuple("-" if row[h] is None else str(row[h]).lower() for h in header)
                        for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    for r in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return EXIT_OK


COMMANDS = {"recognize": cmd_recognize, "positions": cmd_positions,
            "chart": cmd_chart, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        grammar = load_grammar(args.grammar, args.start)
    except (GrammarError, OSError) as exc:
        print(f"tdmemo: {args.grammar}: {exc}", file=sys.stderr)
        return EXIT_GRAMMAR
    try:
        return COMMANDS[args.command](args, grammar)
    except UsageError as exc:
        print(f"tdmemo: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GrammarError as exc:
        print(f"tdmemo: {exc}", file=sys.stderr)
        return EXIT_GRAMMAR
    except ResourceExhausted as exc:
        print(f"tdmemo: {_exhausted_message(exc, grammar, getattr(args, 'engine', ''))}",
              file=sys.stderr)
        return EXIT_FUEL


if __name__ == "__main__":
    sys.exit(main())
