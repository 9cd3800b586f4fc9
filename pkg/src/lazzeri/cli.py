"""Command line front end.

Subcommands: `period` (period matrix of a frame), `reduce` (conformal
normalization of an SPD metric), `verify` (property suites).  The
standalone flag `--dump-basis` prints the multi-index orderings for a
given dimension.  All file I/O is UTF-8 JSON with row-major matrices;
verification reports can also be emitted as CSV with one check per
line.  Exit codes: 0 success, 2 input error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .errors import LazzeriError
from .multiindex import build_index_table
from .period import period_matrix, reduce_conformal
from .siegel import siegel_membership
from .suites import SUITE_NAMES, RunConfig, run_suites

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3


class _InputError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc


def _input_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def cmd_period(args) -> int:
    try:
        payload = _read_json(args.input)
        frame = np.asarray(payload["L"], dtype=float)
        if "n" in payload and frame.shape != (payload["n"], payload["n"]):
            return _input_error("frame shape does not match the declared dimension")
        period = period_matrix(frame, tol=args.tol)
    except (_InputError, LazzeriError, KeyError, TypeError, ValueError) as exc:
        return _input_error(str(exc))
    membership = siegel_membership(period.Z, tol=args.tol)
    result = period.to_dict()
    result["siegel"] = {
        "ok": membership.ok,
        "symmetry_defect": membership.symmetry_defect,
        "min_imag_eigenvalue": membership.min_imag_eigenvalue,
    }
    _emit(result, args.out)
    return EXIT_OK if membership.ok else EXIT_VERIFY


def cmd_reduce(args) -> int:
    try:
        payload = _read_json(args.input)
        metric = np.asarray(payload["P"] if "P" in payload else payload["g"], dtype=float)
        factor, triangular = reduce_conformal(metric)
    except (_InputError, LazzeriError, KeyError, TypeError, ValueError,
            np.linalg.LinAlgError) as exc:
        return _input_error(str(exc))
    _emit({"c": factor, "T": triangular.T.tolist(), "orientation": triangular.orientation}, args.out)
    return EXIT_OK


def _report_csv(report: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["suite", "check", "trial", "value", "pass"])
    for suite in report["suites"].values():
        for check in suite["checks"]:
            writer.writerow(
                [check["suite"], check["check"], check["trial"],
                 repr(check["value"]), check["passed"]]
            )
    return buffer.getvalue()


def cmd_verify(args) -> int:
    try:
        config = RunConfig(
            n=args.n, seed=args.seed, tol=args.tol,
            trials=args.trials, output_format=args.format,
        )
        report = run_suites([args.suite], config)
    except LazzeriError as exc:
        return _input_error(str(exc))
    if config.output_format == "csv":
        text = _report_csv(report)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        else:
            print(text, end="")
    else:
        _emit(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def dump_basis(n: int, m: int | None, out: str | None) -> int:
    try:
        table = build_index_table(n, m)
    except LazzeriError as exc:
        return _input_error(str(exc))
    _emit(table.to_dict(), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lazzeri",
        description="Period matrices of flat tori via the middle-degree Hodge star",
    )
    parser.add_argument("--dump-basis", action="store_true",
                        help="print the multi-index orderings for --n and exit")
    parser.add_argument("--n", type=int, default=6, help="torus dimension (even)")
    parser.add_argument("--m", type=int, default=None, help="form degree (defaults to n/2)")
    parser.add_argument("--out", default=None, help="write output to a file instead of stdout")

    commands = parser.add_subparsers(dest="command")

    period = commands.add_parser("period", help="period matrix of a frame")
    period.add_argument("input", help="JSON file with {n, L} (or - for stdin)")
    period.add_argument("--tol", type=float, default=1e-9)
    period.add_argument("--out", default=None)

    reduce_cmd = commands.add_parser("reduce", help="conformal reduction of an SPD metric")
    reduce_cmd.add_argument("input", help="JSON file with {P} (or - for stdin)")
    reduce_cmd.add_argument("--out", default=None)

    verify = commands.add_parser("verify", help="run a property suite")
    verify.add_argument("suite", choices=list(SUITE_NAMES) + ["all"])
    verify.add_argument("--n", type=int, default=6)
    verify.add_argument("--seed", type=int, default=42)
    verify.add_argument("--tol", type=float, default=1e-9)
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--format", choices=["json", "csv"], default="json")
    verify.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.dump_basis:
        if args.command is not None:
            return _input_error("--dump-basis is a standalone flag")
        return dump_basis(args.n, args.m, args.out)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    if args.command == "period":
        return cmd_period(args)
    if args.command == "reduce":
        return cmd_reduce(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
