"""Command-line entry point ``cliffrad``.

Exit codes: 0 success, 1 failed verification, 2 invalid parameters or input
kind, 3 input validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import logging
import sys
from pathlib import Path

from . import io as sio
from .exactnum import A_const, B_const, c_const, d_const, mu_const
from .polyspace import ck_extend
from .series import (
    LAURENT,
    TAYLOR,
    MonogenicSeries,
    SliceSeries,
    assemble,
    invert_I2,
    invert_In1,
    restrict_x0,
    taylor_from_initial,
)
from .transforms import dual_radon_symbolic, radon_symbolic
from .verify import SUITES, run_suite

log = logging.getLogger("cliffrad")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- constants ---------------------------------------------------------------

def constant_rows(table: str, n: int, max_degree: int):
    """(indices, ExactScalar) rows for one table."""
    rows = []
    if table == "B":
        for k in range(max_degree + 1):
            for alpha in range(-k, max_degree + 1):
                rows.append(({"alpha": alpha, "k": k}, B_const(alpha, k, n)))
    elif table == "A":
        for k in range(max_degree + 1):
            for alpha in range(k + 1, max_degree + k + 2):
                rows.append(({"alpha": alpha, "k": k}, A_const(alpha, k, n)))
    elif table == "mu":
        from .exactnum import ExactScalar

        for j in range(max_degree + 1):
            for k in range(max_degree + 1):
                rows.append(({"j": j, "k": k}, ExactScalar(mu_const(j, k, n))))
    elif table in ("c", "d"):
        fn = c_const if table == "c" else d_const
        for k in range(max_degree + 1):
            for j in range(max_degree + 1):
                rows.append(({"k": k, "j": j}, fn(k, j, n)))
    else:
        raise UsageError(f"unknown table {table!r}")
    return rows


def cmd_constants(args) -> int:
    if args.n < 1 or args.max_degree < 0:
        raise UsageError("need n >= 1 and max-degree >= 0")
    rows = constant_rows(args.table, args.n, args.max_degree)
    records = []
    for idx, v in rows:
        records.append({**idx, "exact": str(v), "value": float(v)})
    if args.format == "json":
        text = json.dumps({"table": args.table, "n": args.n, "rows": records}, indent=1, ensure_ascii=False) + "\n"
    else:
        buf = _stdio.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(records[0]) if records else ["exact", "value"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


# -- apply -------------------------------------------------------------------

def _require(series, kinds, transform):
    kind = "slice" if isinstance(series, SliceSeries) else series.part
    if kind not in kinds:
        raise UsageError(f"{transform} needs a {' or '.join(kinds)} series, got {kind}")
    return kind


def apply_transform(transform: str, series):
    if transform == "dual-radon":
        _require(series, ("slice",), transform)
        if any(j < 0 for j, _ in series.terms):
            raise UsageError("dual-radon is defined for j >= 0 only")
        return dual_radon_symbolic(series)
    if transform == "radon":
        _require(series, (LAURENT,), transform)
        return radon_symbolic(series)
    if transform == "i2":
        _require(series, ("slice",), transform)
        return invert_I2(series)
    if transform == "in1":
        _require(series, (TAYLOR, LAURENT), transform)
        return invert_In1(series)
    if transform == "fischer":
        # Taylor series rebuilt from its initial datum by Fischer decomposition
        _require(series, (TAYLOR,), transform)
        return taylor_from_initial(restrict_x0(series), series.pi_pow)
    if transform == "ck":
        # CK extension of the initial datum, cross-checked against the series
        _require(series, (TAYLOR,), transform)
        if ck_extend(restrict_x0(series)) != assemble(series):
            raise sio.SeriesValidationError("CK extension of the initial datum disagrees with the series")
        return MonogenicSeries(series.n, TAYLOR, dict(series.terms), series.pi_pow)
    raise UsageError(f"unknown transform {transform!r}")


def cmd_apply(args) -> int:
    series = sio.load(args.input)
    out = apply_transform(args.transform, series)
    text = sio.dumps(out)
    sio.loads(text)  # output must revalidate
    _emit(text, args.out)
    return EXIT_OK


# -- verify ------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.max_degree < 0:
        raise UsageError("max-degree must be >= 0")
    if not 2 <= args.n <= 5:
        raise UsageError("verify supports 2 <= n <= 5")
    report = run_suite(args.suite, args.n, args.max_degree, args.seed)
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    for c in report["checks"]:
        log.info("%-34s %s dev=%s tol=%.3g %.2fs", c["name"], c["status"], c["max_deviation"], c["tolerance"], c["wall_time"])
    if not args.report:
        sys.stdout.write(text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _emit(text: str, out):
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log per-check progress")
    p = _Parser(prog="cliffrad", description="Radon and dual Radon transforms on Clifford series.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constants", parents=[common], help="tabulate exact transform constants")
    c.add_argument("--table", choices=["B", "A", "mu", "c", "d"], required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--max-degree", type=int, default=4)
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_constants)

    a = sub.add_parser("apply", parents=[common], help="apply a transform to a series file")
    a.add_argument("--transform", choices=["dual-radon", "radon", "i2", "in1", "ck", "fischer"], required=True)
    a.add_argument("--in", dest="input", required=True)
    a.add_argument("--out", default="-")
    a.set_defaults(func=cmd_apply)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--max-degree", type=int, default=4)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", default=None)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"cliffrad: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, sio.SeriesFileError, OSError) as exc:
        print(f"cliffrad: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except sio.SeriesValidationError as exc:
        print(f"cliffrad: validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
