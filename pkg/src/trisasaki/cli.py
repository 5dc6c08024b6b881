"""Command-line front end.

Exit codes: 0 success, 1 verification or mathematical failure, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pydantic import ValidationError

from . import constructions as cons
from .contact import (
    NotSasakianError,
    PreconditionError,
    SasakiParams,
    VerificationReport,
    infer_parameters,
    preconditions,
    verify_all,
)
from .documents import (
    FORMAT_VERSION,
    dumps,
    from_document,
    load_document,
    matrix_payload,
    report_document,
    to_document,
)
from .linalg import DEFAULT_TOL, format_scalar, parse_scalar

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str, mode: str | None = None, tol: float | None = None):
    try:
        doc = load_document(path)
    except FileNotFoundError as exc:
        raise UsageError(f"{path}: no such file") from exc
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(p) for p in first["loc"]) or "<document>"
        raise UsageError(f"{path}: {loc}: {first['msg']}") from exc
    try:
        L, S, params, labels = from_document(doc, mode, tol)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    return doc, L, S, params, labels


def _label(labels, i: int) -> str:
    return labels[i] if labels and 0 <= i < len(labels) else f"e{i}"


def format_report(report: VerificationReport, labels=None) -> str:
    lines = []
    for c in report.checks:
        line = f"{c.status.upper():4}  {c.name:38} {c.formula}"
        if c.status == "fail":
            if c.witness and not c.name.startswith(("compat.dimensions", "compat.splitting",
                                                    "degenerate.kernel")):
                line += "  at (" + ", ".join(_label(labels, w) for w in c.witness) + ")"
            elif c.witness:
                line += f"  at {tuple(c.witness)}"
            if c.defect is not None:
                line += f"  defect {format_scalar(c.defect)}"
            if c.detail:
                line += f"  [{c.detail}]"
        lines.append(line)
    lines.append(f"overall: {'pass' if report.passed else 'fail'}")
    return "\n".join(lines)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    _, L, S, params, labels = _load(args.file, args.mode, args.tol)
    report, used = verify_all(L, S, params, args.degenerate_only, args.tol)
    print(format_report(report, labels))
    if used is not None:
        print(f"parameters: {used}")
    if args.json:
        Path(args.json).write_text(dumps(report_document(report, used)))
    return EXIT_OK if report.passed else EXIT_FAIL


def _parse_alpha(text: str | None, default: str) -> object:
    try:
        alpha = parse_scalar(text if text is not None else default)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid alpha {text!r}") from exc
    if alpha == 0:
        raise UsageError("alpha must be nonzero")
    return alpha


def cmd_generate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.kind == "heisenberg":
        L, S, p = cons.heisenberg(args.n)
        labels = cons.basis_labels(args.n)
    elif args.kind == "t3":
        L, S, p = cons.t3()
        labels = cons.basis_labels(0)
    elif args.kind == "su2":
        L, S, p = cons.su2()
        labels = cons.basis_labels(0)
    else:
        alpha = _parse_alpha(args.alpha, "1")
        L, S, p = cons.flat_boothby_wang(cons.FlatHyperkahler.standard(args.n), alpha)
        labels = cons.basis_labels(args.n)
    _emit(dumps(to_document(L, S, p, labels)), args.output)
    return EXIT_OK


def _scalar_arg(name: str, text: str):
    try:
        return parse_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--{name}: not a number: {text!r}") from exc


def cmd_deform(args) -> int:
    a, b, c = (_scalar_arg(n, t) for n, t in (("a", args.a), ("b", args.b), ("c", args.c)))
    try:
        d = cons.DeformationParams(a, b, c)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _, L, S, params, labels = _load(args.file)
    report, params = verify_all(L, S, params)
    if not report.passed:
        print(format_report(report, labels), file=sys.stderr)
        print("error: input does not verify", file=sys.stderr)
        return EXIT_FAIL
    if params.alpha is None:
        params = SasakiParams(parse_scalar(1), params.delta)
    L2, S2, p2 = cons.h_deformation(L, S, params, d)
    _emit(dumps(to_document(L2, S2, p2, labels)), args.output)
    return EXIT_OK


def cmd_infer(args) -> int:
    _, L, S, _, _ = _load(args.file, args.mode, args.tol)
    pre = preconditions(L, S, args.tol)
    if not pre.passed:
        print(f"not 3-(α,δ)-Sasakian: precondition {pre.first_failure().name} fails")
        return EXIT_FAIL
    try:
        p = infer_parameters(L, S, args.tol)
    except NotSasakianError as exc:
        print(str(exc))
        return EXIT_FAIL
    print(p)
    return EXIT_OK


def cmd_isomorphism(args) -> int:
    _, L, S, params, labels = _load(args.file)
    nil, _ = cons.is_nilpotent(L)
    if not nil:
        print("error: the algebra is not nilpotent; the isomorphism onto a quaternionic "
              "Heisenberg algebra only exists for nilpotent algebras", file=sys.stderr)
        return EXIT_FAIL
    report, params = verify_all(L, S, params, degenerate_only=True)
    if not report.passed or params is None or params.alpha is None:
        print(format_report(report, labels), file=sys.stderr)
        print("error: input is not a degenerate 3-(α,δ)-Sasakian structure with known alpha",
              file=sys.stderr)
        return EXIT_FAIL
    try:
        result = cons.build_isomorphism(L, S, params, args.tol)
    except (PreconditionError, cons.NotNilpotentError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(format_report(result.report, labels))
    print(f"max defect: {result.report.max_defect:.3e}")
    payload = {
        "format_version": FORMAT_VERSION,
        "psi": matrix_payload(result.psi),
        "report": report_document(result.report).model_dump(mode="json", exclude_none=True),
    }
    if result.deformation is not None:
        d = result.deformation
        payload["deformation"] = {k: format_scalar(getattr(d, k)) for k in ("a", "b", "c")}
    if args.output:
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK if result.passed else EXIT_FAIL


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trisasaki",
        description="Verify and construct degenerate 3-(alpha,delta)-Sasakian Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check all axioms of a structure document")
    p.add_argument("file")
    p.add_argument("--mode", choices=["exact", "float"], default=None)
    p.add_argument("--tol", type=float, default=None,
                   help=f"float-mode tolerance (default {DEFAULT_TOL})")
    p.add_argument("--degenerate-only", action="store_true",
                   help="check dη_i = 2αΦ_i^H instead of the general equation")
    p.add_argument("--json", metavar="PATH", help="also write a machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="emit a bundled example structure")
    p.add_argument("kind", choices=["heisenberg", "t3", "flat-bw", "su2"])
    p.add_argument("--n", type=int, default=1, help="quaternionic dimension")
    p.add_argument("--alpha", default=None, help="alpha for flat-bw (default 1)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("deform", help="apply an H-homothetic deformation (a, b, c)")
    p.add_argument("file")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("infer", help="print the (alpha, delta) of a structure")
    p.add_argument("file")
    p.add_argument("--mode", choices=["exact", "float"], default=None)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("isomorphism", help="map a nilpotent structure onto the quaternionic "
                                           "Heisenberg algebra")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="where to write psi and its report")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_isomorphism)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
