"""Command-line front end.

Exit codes: 0 success, 1 ``--check`` mismatch, 2 unreadable or malformed
input, 3 domain error (bounds, discarded margin, oversized image),
4 invalid flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import formats, pgm
from .binarize import BinarizeParams, binarize, binarize_naive
from .core import Image, check_lanes, compute
from .hw import REPORT_FIELDS, published_reduction_check, strategy_cost_table
from .storage import (
    METHODS,
    DiscardedRegionError,
    Rect,
    ReducedIntegral,
    box_filter_compressed,
    box_filter_modular,
    compress_plus_pattern,
    memory_report,
    reduce_word_length,
    word_length_exact,
    word_length_variant,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_DOMAIN, EXIT_FLAGS = 0, 1, 2, 3, 4

STRATEGY_FLAGS = ("naive", "serial", "two-row", "four-row", "n-row", "diff-row")
METHOD_FLAGS = tuple(m.replace("_", "-") for m in METHODS)


class FlagError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must look like 1920x1080, got {text!r}")
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("sizes must be positive")
    return w, h


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--strategy", choices=STRATEGY_FLAGS, default="four-row")
    common.add_argument("--n", type=int, help="row lanes for --strategy n-row (even)")
    common.add_argument("--method", choices=METHOD_FLAGS + ("all",), action="append")
    common.add_argument("--wmax", type=int)
    common.add_argument("--hmax", type=int)

    parser = _Parser(prog="intimg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="integral image to an IIMG dump")
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("report", parents=[common], help="cost, memory and storage tables")
    p.add_argument("--sizes", type=_size, nargs="+")
    p.add_argument("--input", help="take the size from a PGM file")
    p.add_argument("--published", action="store_true",
                   help="compare internal-memory reduction with the published prototype figures")
    p.add_argument("--output", help="write the table here instead of stdout")

    p = sub.add_parser("query", parents=[common], help="box filter sum from an IIMG/IICP dump")
    p.add_argument("dump")
    p.add_argument("--rect", type=int, nargs=4, required=True, metavar=("TOP", "LEFT", "BOTTOM", "RIGHT"))

    p = sub.add_parser("compress", parents=[common], help="plus-pattern IICP dump")
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("binarize", parents=[common], help="adaptive binarization to PBM/PGM")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--window", type=int, default=15)
    p.add_argument("--k", type=float, default=0.5)
    p.add_argument("--r", type=float, default=128.0)
    p.add_argument("--pgm", action="store_true", help="write PGM {0,255} instead of PBM")
    p.add_argument("--check", action="store_true", help="also run the direct-window oracle")
    return parser


def _strategy(args) -> tuple[str, int | None]:
    strategy = args.strategy.replace("-", "_")
    if strategy == "n_row":
        if args.n is None:
            raise FlagError("--strategy n-row needs --n")
        try:
            return strategy, check_lanes(args.n)
        except ValueError as exc:
            raise FlagError(str(exc))
    return strategy, None


def _single_method(args, allowed) -> str:
    methods = args.method or [allowed[0]]
    if len(methods) != 1 or methods[0] not in allowed:
        raise FlagError(f"--method must be one of {', '.join(allowed)}")
    method = methods[0].replace("-", "_")
    if method not in ("full", "method1") and (args.wmax is None or args.hmax is None):
        raise FlagError(f"--method {methods[0]} needs --wmax and --hmax")
    if (args.wmax is not None and args.wmax < 1) or (args.hmax is not None and args.hmax < 1):
        raise FlagError("--wmax/--hmax must be positive")
    return method


def _reduced_bits(method: str, wmax: int, hmax: int) -> int:
    if method.endswith("exact"):
        return word_length_exact(8, wmax, hmax)
    return word_length_variant(8, wmax, hmax)


def _read_image(path) -> Image:
    return Image(pgm.read_pgm(path))


def cmd_compute(args, out) -> int:
    strategy, n = _strategy(args)
    method = _single_method(args, ("full", "exact", "variant"))
    img = _read_image(args.input)
    ii, trace = compute(img, strategy, n)
    table = ii
    if method != "full":
        table = reduce_word_length(ii, _reduced_bits(method, args.wmax, args.hmax), args.wmax, args.hmax)
    with open(args.output, "wb") as fh:
        fh.write(formats.dump_integral(table))
    print(json.dumps(trace.as_dict()), file=out)
    return EXIT_OK


def _emit(rows: list[dict], fields, fmt: str, out) -> None:
    if fmt == "json":
        print(json.dumps(rows, indent=2), file=out)
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    out.write(buf.getvalue())


def cmd_report(args, out) -> int:
    if args.output:
        with open(args.output, "w", newline="") as fh:
            return _report(args, fh)
    return _report(args, out)


def _report(args, out) -> int:
    if args.published:
        rows = published_reduction_check()
        _emit(rows, rows[0].keys(), args.format, out)
        return EXIT_OK
    sizes = list(args.sizes or [])
    if args.input:
        img = _read_image(args.input)
        sizes.append((img.width, img.height))
    if not sizes:
        raise FlagError("report needs --sizes or --input")
    if not args.method:
        _emit(strategy_cost_table(sizes), REPORT_FIELDS, args.format, out)
        return EXIT_OK
    methods = METHODS if "all" in args.method else [m.replace("-", "_") for m in args.method]
    if any(m not in ("full", "method1") for m in methods) and (args.wmax is None or args.hmax is None):
        raise FlagError("width-reducing methods need --wmax and --hmax")
    rows = [memory_report(w, h, 8, m, args.wmax, args.hmax).as_dict() for w, h in sizes for m in methods]
    _emit(rows, rows[0].keys(), args.format, out)
    return EXIT_OK


def cmd_query(args, out) -> int:
    with open(args.dump, "rb") as fh:
        data = fh.read()
    try:
        rect = Rect(*args.rect)
    except ValueError as exc:
        raise DiscardedRegionError(str(exc))
    if data[:4] == formats.IICP_MAGIC:
        c = formats.load_compressed(data)
        res = box_filter_compressed(c, rect)
        print(json.dumps({"sum": res.total, "reconstructed": res.reconstructed}), file=out)
        return EXIT_OK
    values, word_bits = formats.load_integral(data)
    h, w = values.shape
    table = ReducedIntegral(values, word_bits, w, h)
    print(json.dumps({"sum": box_filter_modular(table, rect)}), file=out)
    return EXIT_OK


def cmd_compress(args, out) -> int:
    strategy, n = _strategy(args)
    method = _single_method(args, ("method1", "method2-exact", "method2-variant"))
    img = _read_image(args.input)
    ii, _ = compute(img, strategy, n)
    if method == "method1":
        c = compress_plus_pattern(ii, img)
    else:
        bits = _reduced_bits(method, args.wmax, args.hmax)
        c = compress_plus_pattern(ii, img, bits, args.wmax, args.hmax)
    with open(args.output, "wb") as fh:
        fh.write(formats.dump_compressed(c))
    print(json.dumps({
        "method": method,
        "word_bits": c.word_bits,
        "trimmed_width": c.trimmed_width,
        "trimmed_height": c.trimmed_height,
        "stored": c.stored_count,
    }), file=out)
    return EXIT_OK


def cmd_binarize(args, out) -> int:
    strategy, n = _strategy(args)
    try:
        params = BinarizeParams(args.window, args.k, args.r)
    except ValueError as exc:
        raise FlagError(str(exc))
    img = _read_image(args.input)
    result = binarize(img, params, strategy, n)
    payload = pgm.encode_pgm(result.as_pgm_values()) if args.pgm else pgm.encode_pbm(result.bits)
    with open(args.output, "wb") as fh:
        fh.write(payload)
    if args.check:
        if binarize_naive(img, params) == result:
            print("OK: outputs identical", file=out)
        else:
            print("MISMATCH: integral and direct-window outputs differ", file=out)
            return EXIT_MISMATCH
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "report": cmd_report,
    "query": cmd_query,
    "compress": cmd_compress,
    "binarize": cmd_binarize,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except FlagError as exc:
        print(f"intimg {args.command}: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (pgm.PGMError, formats.FormatError, OSError) as exc:
        print(f"intimg {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DiscardedRegionError, IndexError, ValueError, OverflowError) as exc:
        print(f"intimg {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
