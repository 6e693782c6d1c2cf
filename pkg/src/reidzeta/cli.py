"""Command-line interface: compute | zeta | classify | oracle-check.

Exit codes are a stable contract: 0 success, 2 parse/validation error,
3 not tame, 4 oracle budget exceeded.  Reports are canonical JSON with every
number exact (integers, or "p/q" strings); --format table renders the same
content for humans.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import engine, io, zeta
from .errors import (
    BudgetExceeded,
    NotTameAt,
    ReidzetaError,
    SingularDifference,
    SpecValidationError,
)
from .zeta import DichotomyVerdict, RationalForm

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NOT_TAME = 3
EXIT_BUDGET = 4


def _form_doc(form: RationalForm | None):
    if form is None:
        return None
    return {
        "numerator": [int(v) for v in form.numerator],
        "denominator": [int(v) for v in form.denominator],
    }


def _verdict_doc(verdict: DichotomyVerdict):
    witness = None
    if verdict.witness is not None:
        p, factor, index = verdict.witness
        witness = {"prime": p, "factor": factor, "index": index}
    product_form = None
    if verdict.product_form is not None:
        product_form = [
            [io.format_rational(w), c] for w, c in verdict.product_form
        ]
    return {
        "tag": verdict.tag,
        "reason": verdict.reason,
        "witness": witness,
        "product_form": product_form,
        "rational_form": _form_doc(verdict.rational_form),
        "zstar_form": _form_doc(verdict.zstar_form),
    }


def _base_report(command: str, spec: io.ProblemSpec) -> dict:
    return {
        "schema": io.SCHEMA,
        "command": command,
        "spec_sha256": spec.sha256,
        "conditional": spec.external is not None,
        "warnings": (
            ["verdict conditional on user eigendata"] if spec.external else []
        ),
    }


def _emit(report: dict, args, elapsed_us: int) -> None:
    report["elapsed_us"] = elapsed_us
    if args.format == "json":
        text = io.canonical_json(report)
    else:
        text = _render_table(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _render_table(report: dict, indent: str = "") -> str:
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_render_table(value, indent + "  "))
        elif isinstance(value, list):
            pretty = " ".join(str(v) for v in value)
            lines.append(f"{indent}{key}: [{pretty}]")
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(line for line in lines if line)


def _cmd_compute(spec: io.ProblemSpec, args) -> tuple[dict, int]:
    report = _base_report("compute", spec)
    report["max_n"] = args.max_n
    try:
        report["r_sequence"] = engine.r_sequence(spec.target, args.max_n)
    except NotTameAt as exc:
        report["r_sequence"] = engine.r_sequence(spec.target, exc.n - 1)
        report["not_tame_at"] = exc.n
        return report, EXIT_NOT_TAME
    return report, EXIT_OK


def _cmd_zeta(spec: io.ProblemSpec, args) -> tuple[dict, int]:
    report = _base_report("zeta", spec)
    report["terms"] = args.terms
    try:
        r_vals = engine.r_sequence(spec.target, args.terms)
    except NotTameAt as exc:
        report["not_tame_at"] = exc.n
        return report, EXIT_NOT_TAME
    series = zeta.zeta_coefficients(r_vals)
    report["r_sequence"] = r_vals
    report["zeta_coefficients"] = [io.format_rational(a) for a in series.coefficients]
    report["zstar_coefficients"] = list(zeta.zstar_series(r_vals))
    max_order = min(args.max_order, max(1, (args.terms - 4) // 2))
    if max_order < args.max_order:
        report["warnings"] = report["warnings"] + [
            f"recurrence order bound lowered to {max_order} for {args.terms} terms"
        ]
    try:
        fit = zeta.detect_linear_recurrence(r_vals, max_order)
        report["recurrence"] = {
            "order": fit.order,
            "coefficients": [io.format_rational(c) for c in fit.coefficients],
        }
        report["zstar_form"] = _form_doc(fit.zstar_form)
    except (zeta.NoRecurrenceFound, ValueError) as exc:
        report["recurrence"] = None
        report["zstar_form"] = None
        report["warnings"] = report["warnings"] + [f"no recurrence: {exc}"]
    return report, EXIT_OK


def _cmd_classify(spec: io.ProblemSpec, args) -> tuple[dict, int]:
    report = _base_report("classify", spec)
    verdict = zeta.classify_dichotomy(
        spec.target,
        external=spec.external,
        terms=args.terms,
        max_order=args.max_order,
    )
    report["verdict"] = _verdict_doc(verdict)
    report["conditional"] = report["conditional"] or verdict.conditional
    return report, EXIT_OK


def _cmd_oracle_check(spec: io.ProblemSpec, args) -> tuple[dict, int]:
    from . import oracle
    from .arith import mat_pow

    report = _base_report("oracle-check", spec)
    report["max_n"] = args.max_n
    report["budget"] = args.budget
    factors = spec.factor_list()
    for group, _ in factors:
        if group.inverted_primes:
            raise SpecValidationError(
                "oracle-check needs S = {} factors: the quotient enumeration "
                "is a plain-integer-lattice count"
            )
    comparisons = []
    exit_code = EXIT_OK
    for n in range(1, args.max_n + 1):
        for k, (group, pair) in enumerate(factors, start=1):
            entry = {"n": n, "factor": k}
            r = engine.abelian_r(group, pair, n)
            entry["engine"] = "inf" if r.is_infinite else int(r)
            try:
                count = oracle.brute_force_abelian_r(
                    mat_pow(pair.phi, n), mat_pow(pair.psi, n), budget=args.budget
                )
                entry["oracle"] = count
                entry["status"] = (
                    "match" if (not r.is_infinite and count == int(r)) else "mismatch"
                )
            except BudgetExceeded as exc:
                entry["oracle"] = None
                entry["status"] = f"budget_exceeded: {exc}"
                exit_code = EXIT_BUDGET
            except SingularDifference:
                entry["oracle"] = None
                entry["status"] = "infinite" if r.is_infinite else "mismatch"
            comparisons.append(entry)
    report["comparisons"] = comparisons
    report["all_match"] = all(c["status"] in ("match", "infinite") for c in comparisons)
    return report, exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reidzeta",
        description=(
            "Exact coincidence Reidemeister numbers and zeta functions for "
            "endomorphism pairs on S-arithmetic abelian and nilpotent groups."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="problem description file (JSON, schema reidzeta/1)")
        p.add_argument("--output", help="write the report to this path instead of stdout")
        p.add_argument(
            "--format", choices=("json", "table"), default="json",
            help="report rendering (default json)",
        )

    p = sub.add_parser("compute", help="exact R(phi^n, psi^n) for n = 1..N")
    common(p)
    p.add_argument("--max-n", type=int, default=10, metavar="N")

    p = sub.add_parser("zeta", help="zeta coefficients and Z* rational form")
    common(p)
    p.add_argument("--terms", type=int, default=20, metavar="M")
    p.add_argument("--max-order", type=int, default=8, metavar="K",
                   help="recurrence order bound for detection")

    p = sub.add_parser("classify", help="rational / natural-boundary verdict")
    common(p)
    p.add_argument("--terms", type=int, default=40, metavar="M")
    p.add_argument("--max-order", type=int, default=12, metavar="K")

    p = sub.add_parser("oracle-check", help="compare the engine against brute force")
    common(p)
    p.add_argument("--max-n", type=int, default=3, metavar="N")
    p.add_argument("--budget", type=int, default=10**7, metavar="B",
                   help="cell budget for the brute-force enumeration")
    return parser


_HANDLERS = {
    "compute": _cmd_compute,
    "zeta": _cmd_zeta,
    "classify": _cmd_classify,
    "oracle-check": _cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        spec = io.load_problem(args.spec)
        report, code = _HANDLERS[args.command](spec, args)
    except SpecValidationError as exc:
        for v in exc.violations:
            print(f"error: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    except ReidzetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    elapsed_us = int((time.perf_counter() - start) * 1_000_000)
    _emit(report, args, elapsed_us)
    return code


if __name__ == "__main__":
    sys.exit(main())
