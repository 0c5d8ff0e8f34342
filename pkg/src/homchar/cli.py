"""Command-line front end.

Subcommands:

* ``analyze EQUATION``           full pipeline: parse, split, validate,
                                 derived identities, constraints, families.
* ``verify EQUATION CANDIDATES`` substitute a candidate file and report exact
                                 residuals and/or field-oracle verdicts.
* ``oracle polarization N``      symbolic difference-operator check.
* ``oracle bruteforce P PATTERN``permutation enumeration vs the fast path.

Exit codes: 0 success, 2 parse/validation error, 3 verification failure,
4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys
from pathlib import Path

from . import equation, fieldlab, report
from .errors import (
    BindingError,
    CannotEliminateError,
    CapExceededError,
    DomainEvalError,
    EquationSyntaxError,
    HomcharError,
    IncompleteAssignmentError,
    InvalidProfileError,
    ResourceCapError,
    UniverseMismatchError,
    UnsupportedFormError,
    UnsupportedPatternError,
)
from .symmetrize import BlockPattern
from .verify import parse_candidate_file

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFY_FAILED = 3
EXIT_CAP = 4

_VALIDATION_ERRORS = (
    EquationSyntaxError,
    UnsupportedFormError,
    InvalidProfileError,
    UnsupportedPatternError,
    BindingError,
    DomainEvalError,
    IncompleteAssignmentError,
    CannotEliminateError,
    UniverseMismatchError,
)
_CAP_ERRORS = (CapExceededError, ResourceCapError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homchar",
        description=(
            "Analyze and verify functional equations  sum_i f_i^(q_i)(x^(p_i)) = 0 "
            "for additive unknowns over characteristic-0 fields."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--seed", type=int, default=42, help="RNG seed for sampling layers")
        p.add_argument("--samples", type=int, default=32, help="number of oracle sample points")
        p.add_argument(
            "--tolerance",
            type=float,
            default=1e-9,
            help="residual tolerance for the numeric layers",
        )

    analyze = sub.add_parser("analyze", help="full analysis pipeline for an equation")
    analyze.add_argument("equation", help="equation text, e.g. 'f(x^4) + g^2(x^2) + h^4(x) = 0'")
    analyze.add_argument("--k", type=int, default=None, help="number of homomorphisms in the expansion (default n-1)")
    analyze.add_argument(
        "--real",
        action="store_true",
        help="add the real-valued specialization (identity homomorphism) to the report",
    )
    add_common(analyze)

    verify_cmd = sub.add_parser("verify", help="check a candidate file against an equation")
    verify_cmd.add_argument("equation", help="equation text")
    verify_cmd.add_argument("candidates", help="path to a 'name = expression' candidate file")
    verify_cmd.add_argument(
        "--mode",
        choices=("symbolic", "oracle", "both"),
        default="both",
        help="which checks to run",
    )
    verify_cmd.add_argument(
        "--bindings",
        default=None,
        help="JSON object or @file binding symbols to a field, "
        'e.g. \'{"field": "Q(t)", "phi1": "id", "a1": "dlog"}\'',
    )
    add_common(verify_cmd)

    oracle = sub.add_parser("oracle", help="independent oracles for the symbolic fast paths")
    oracle_sub = oracle.add_subparsers(dest="oracle_command", required=True)
    polarization = oracle_sub.add_parser("polarization", help="difference-operator identities")
    polarization.add_argument("order", type=int, help="order of the symmetric form (1..4)")
    add_common(polarization)
    bruteforce = oracle_sub.add_parser("bruteforce", help="permutation enumeration for a pattern")
    bruteforce.add_argument("profile", help="rows as a literal list, e.g. '[(2,2),(4,1)]'")
    bruteforce.add_argument("pattern", help="pattern literal, e.g. '{x:1,y:1,1:2}'")
    add_common(bruteforce)
    return parser


def _options(args: argparse.Namespace, **extra) -> dict:
    options = {
        "seed": args.seed,
        "samples": args.samples,
        "tolerance": args.tolerance,
    }
    options.update(extra)
    return options


def _parse_profile_literal(text: str) -> list[tuple[int, int]]:
    try:
        value = ast.literal_eval(text)
        rows = [(int(p), int(q)) for p, q in value]
    except (ValueError, SyntaxError, TypeError) as exc:
        raise UnsupportedFormError(f"cannot read profile literal {text!r}: {exc}") from None
    if not rows:
        raise UnsupportedFormError("profile literal is empty")
    return rows


def _load_bindings(spec: str | None) -> fieldlab.Bindings | None:
    if spec is None:
        return None
    text = spec
    if spec.startswith("@"):
        text = Path(spec[1:]).read_text(encoding="utf-8")
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BindingError(f"bindings are not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise BindingError("bindings must be a JSON object")
    return fieldlab.Bindings.from_config(config)


def dispatch(args: argparse.Namespace) -> tuple[dict, int]:
    if args.command == "analyze":
        terms = equation.parse_equation(args.equation)
        return report.analyze_report(
            args.equation,
            terms,
            args.k,
            args.real,
            _options(args, k=args.k),
        )
    if args.command == "verify":
        terms = equation.parse_equation(args.equation)
        profile = equation.ExponentProfile.from_terms(terms)
        candidate_text = Path(args.candidates).read_text(encoding="utf-8")
        cand = parse_candidate_file(candidate_text, profile)
        bindings = _load_bindings(args.bindings)
        return report.verify_report(
            args.equation,
            terms,
            cand,
            args.mode,
            bindings,
            _options(args, mode=args.mode),
        )
    if args.oracle_command == "polarization":
        return report.polarization_report(args.order, _options(args))
    rows = _parse_profile_literal(args.profile)
    pattern = BlockPattern.parse(args.pattern)
    return report.bruteforce_report(rows, pattern, _options(args))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, exit_code = dispatch(args)
    except _CAP_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except HomcharError as exc:  # anything else package-specific
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(report.to_json(result) if args.json else report.to_text(result))
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
