"""
Command-line entry point.

Exit codes::

    0   Feasible / success
    1   Infeasible (check), or non-orthogonal set (synthesize)
    2   NecessaryTestsPassed (check --mode sorter)
    3   simulation output failed to decode
    4   demo-nogo expectations not met
    64  usage or IO error
    65  malformed input file
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from typing import Sequence

import numpy as np

from .errors import QOrderError
from .feasibility import (
    DEFAULT_TOL,
    FeasibilityReport,
    PartialIsometrySpec,
    Verdict,
    comparator_feasible,
    sorter_feasible,
    unitary_extension_feasible,
)
from .fileio import FileFormatError, dump_circuit, encode_complex, load_circuit, load_state_file
from .linalg import StateVector, tensor
from .ordering import OrderedStateSet, classify_set, valuation
from .simulator import decode_compare, decode_sort, flag_distribution, simulate_compare, simulate_sort
from .synthesis import ComparatorCircuit, build_comparator, build_sorter

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_NECESSARY = 2
EXIT_DECODE_FAILED = 3
EXIT_DEMO_UNMET = 4
EXIT_USAGE = 64
EXIT_DATAERR = 65

TOL_ENV = "QORDER_TOL"

VERDICT_EXIT = {
    Verdict.FEASIBLE: EXIT_OK,
    Verdict.INFEASIBLE: EXIT_INFEASIBLE,
    Verdict.NECESSARY_TESTS_PASSED: EXIT_NECESSARY,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-15:
        return f"{z.real:.10g}"
    return f"{z.real:.10g}{z.imag:+.10g}j"


def report_to_dict(report: FeasibilityReport) -> dict:
    return {
        "check": report.check,
        "verdict": report.verdict.value,
        "tol": report.tol,
        "max_residual": report.max_residual,
        "violations": [
            {
                "indices": list(v.indices),
                "lhs": encode_complex(v.lhs),
                "rhs": encode_complex(v.rhs),
                "residual": v.residual,
            }
            for v in report.violations
        ],
    }


def format_report(report: FeasibilityReport, indent: str = "") -> str:
    lines = [
        f"{indent}check: {report.check}",
        f"{indent}verdict: {report.verdict.value}",
        f"{indent}tolerance: {report.tol:g}",
        f"{indent}max residual: {report.max_residual:.10g}",
    ]
    if report.violations:
        what = "triple" if len(report.violations[0].indices) == 3 else "pair"
        lines.append(f"{indent}violations:")
        for v in report.violations:
            idx = ",".join(str(k) for k in v.indices)
            lines.append(
                f"{indent}  {what} ({idx}): lhs={_fmt(v.lhs)} rhs={_fmt(v.rhs)} residual={v.residual:.10g}"
            )
    return "\n".join(lines)


def resolve_tol(arg: float | None) -> float:
    if arg is not None:
        tol = arg
    elif os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise UsageError(f"{TOL_ENV}={os.environ[TOL_ENV]!r} is not a number") from None
    else:
        tol = DEFAULT_TOL
    if not math.isfinite(tol) or tol < 0:
        raise UsageError(f"tolerance must be a finite nonnegative number, got {tol!r}")
    return tol


def _emit_json(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def cmd_check(args) -> int:
    tol = resolve_tol(args.tol)
    loaded = load_state_file(args.file)
    states = loaded.states
    try:
        if args.mode == "comparator":
            report = comparator_feasible(states, tol)
        elif args.mode == "sorter":
            report = sorter_feasible(states, tol)
        else:
            if not loaded.pairs:
                raise UsageError('mode "spec" needs a "pairs" list in the file')
            report = unitary_extension_feasible(loaded.spec(), tol)
    except QOrderError as err:
        raise UsageError(f"{args.mode} check: {err.message}") from None

    classification = classify_set(states).value
    values = [valuation(s, loaded.valuation) for s in states]
    if args.json:
        _emit_json({
            "schema": 1,
            "command": "check",
            "mode": args.mode,
            "classification": classification,
            "states": [{"index": k, "label": label, "valuation": v}
                       for k, (label, v) in enumerate(zip(states.labels, values), start=1)],
            "warnings": loaded.warnings,
            "report": report_to_dict(report),
        })
    else:
        print(f"states: {len(states)} in dimension {states.dim} ({classification})")
        for k, (label, v) in enumerate(zip(states.labels, values), start=1):
            print(f"  {k}: {label}  v={v:.10g}")
        print(format_report(report))
    return VERDICT_EXIT[report.verdict]


def cmd_synthesize(args) -> int:
    loaded = load_state_file(args.file)
    states = loaded.states
    if args.mode == "sorter" and args.n is None:
        raise UsageError("--n is required for --mode sorter")
    try:
        if args.mode == "comparator":
            circuit = build_comparator(states)
            summary = f"comparator circuit, {circuit.dim}x{circuit.dim} unitary"
        else:
            circuit = build_sorter(states, args.n)
            summary = f"sorter circuit, {len(circuit.stages)} stages on {circuit.n_registers} registers"
    except QOrderError as err:
        if err.code == "not-orthogonal":
            print(f"error: {err.message}", file=sys.stderr)
            print(f"run `qorder check {args.file} --mode comparator` for the certificate", file=sys.stderr)
            return EXIT_INFEASIBLE
        if err.code == "bad-n":
            raise UsageError(err.message) from None
        raise

    text = dump_circuit(circuit)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {summary} to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_indices(raw: str) -> list[int]:
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"input must be comma-separated integers, got {raw!r}") from None


def cmd_simulate(args) -> int:
    circuit = load_circuit(args.circuit)
    indices = _parse_indices(args.input)
    try:
        if isinstance(circuit, ComparatorCircuit):
            if len(indices) != 2:
                raise UsageError("a comparator takes exactly two indices")
            final = simulate_compare(circuit, *indices)
            result = decode_compare(circuit, final)
            output, flags = list(result.registers), [result.flag]
            flag_factors = [0]
            kind = "comparator"
        else:
            if len(indices) != circuit.n_registers:
                raise UsageError(f"this sorter takes {circuit.n_registers} indices")
            final = simulate_sort(circuit, indices)
            result = decode_sort(circuit, final)
            output, flags = list(result.output), list(result.flags)
            flag_factors = list(range(circuit.n_registers, circuit.n_registers + circuit.n_flags))
            kind = "sorter"
    except QOrderError as err:
        if err.code == "decode-failed":
            print(f"internal error: {err.message}", file=sys.stderr)
            return EXIT_DECODE_FAILED
        raise UsageError(err.message) from None

    if args.json:
        _emit_json({
            "schema": 1,
            "command": "simulate",
            "kind": kind,
            "input": indices,
            "output": output,
            "flags": flags,
            "flag_distributions": [flag_distribution(final, f) for f in flag_factors],
            "norm": final.norm(),
        })
    else:
        if kind == "comparator":
            print(f"flag: {flags[0]}")
        print("output: " + ",".join(str(k) for k in output))
        print("flags: " + ",".join(str(b) for b in flags))
    return EXIT_OK


def nogo_cases(tol: float) -> list[tuple[str, FeasibilityReport]]:
    """The three textbook counterexamples as feasibility reports."""
    zero, one = StateVector.basis(2, 0), StateVector.basis(2, 1)
    plus = StateVector(np.array([1, 1]) / np.sqrt(2))
    cloning = PartialIsometrySpec((
        (tensor(zero, zero), tensor(zero, zero)),
        (tensor(plus, zero), tensor(plus, plus)),
    ))
    return [
        ("comparator {|0>, |+>}", comparator_feasible(OrderedStateSet.of(zero, plus), tol)),
        ("sorter {|+>, |0>, |1>}", sorter_feasible(OrderedStateSet.of(plus, zero, one), tol)),
        ("cloning {|0>|0> -> |0>|0>, |+>|0> -> |+>|+>}", unitary_extension_feasible(cloning, tol)),
    ]


def cmd_demo_nogo(args) -> int:
    tol = resolve_tol(args.tol)
    cases = nogo_cases(tol)
    all_infeasible = all(r.verdict is Verdict.INFEASIBLE for _, r in cases)
    if args.json:
        _emit_json({
            "schema": 1,
            "command": "demo-nogo",
            "all_infeasible": all_infeasible,
            "cases": [{"name": name, "report": report_to_dict(r)} for name, r in cases],
        })
    else:
        for name, report in cases:
            print(f"== {name}")
            print(format_report(report, indent="  "))
        if not all_infeasible:
            print("demo expectations not met", file=sys.stderr)
    return EXIT_OK if all_infeasible else EXIT_DEMO_UNMET


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qorder", description="Unitary comparators and sorters for pure-state alphabets.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="decide whether a comparator/sorter/spec is unitary-realizable")
    p.add_argument("file")
    p.add_argument("--mode", choices=["comparator", "sorter", "spec"], default="comparator")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synthesize", help="build a comparator or sorting network for an orthogonal set")
    p.add_argument("file")
    p.add_argument("--mode", choices=["comparator", "sorter"], default="comparator")
    p.add_argument("--n", type=int, default=None, help="number of registers (sorter)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("simulate", help="run a synthesized circuit on basis-alphabet inputs")
    p.add_argument("circuit")
    p.add_argument("input", help="comma-separated 1-based indices, e.g. 3,2,1")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("demo-nogo", help="print the comparator, sorter and cloning no-go certificates")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_demo_nogo)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as err:
        print(f"qorder: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except FileFormatError as err:
        print(f"qorder: error: {err}", file=sys.stderr)
        return EXIT_DATAERR
    except QOrderError as err:
        print(f"qorder: error: {err}", file=sys.stderr)
        return EXIT_DATAERR
    except OSError as err:
        print(f"qorder: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
