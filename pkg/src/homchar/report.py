"""Report assembly: JSON-ready dictionaries plus their plain-text rendering.

Reports are plain dicts of JSON primitives so that ``json.dumps(...,
sort_keys=True)`` gives byte-identical output for identical inputs and
seed.  The same dict drives the text renderer.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from . import ansatz, equation, fieldlab, symmetrize, verify
from .equation import EquationTerm, ExponentProfile
from .symmetrize import BlockPattern

SCHEMA = "homchar/1"

# What each report section is, mathematically; stable across runs.
PROVENANCE = {
    "condition_check": "exponent pattern with pairwise distinct inner and outer powers and a common product N > 1",
    "degree_split": "scaling x by rationals separates summands of different total degree into independent sub-equations",
    "dependence_identity": "symmetrized N-additive form evaluated with one marked slot and N-1 unit slots",
    "pair_identity": "symmetrized N-additive form evaluated with two marked slots and N-2 unit slots",
    "constraints": "coefficients of the homomorphism-power expansion, each forced to vanish by algebraic independence",
    "families": "block decompositions of the term indices, one homomorphism per block, with per-block power-sum constraints",
    "real_even_note": "with every outer power even, real-valued solutions are sums of squares and must vanish",
    "real_specialization": "over the reals the only nonzero homomorphism is the identity, so solutions are c_i * x and automatically continuous",
}


def base_report(command: str, options: Mapping[str, Any]) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "options": dict(options),
    }


# -- analyze -----------------------------------------------------------------


def analyze_report(
    text: str,
    terms: list[EquationTerm],
    k: int | None,
    real_mode: bool,
    options: Mapping[str, Any],
) -> tuple[dict, int]:
    report = base_report("analyze", options)
    report["equation"] = {
        "input": text,
        "canonical": equation.print_equation(terms),
    }
    groups = []
    exit_code = 0
    for degree, group_terms in equation.degree_split(terms):
        entry: dict[str, Any] = {
            "degree": degree,
            "terms": equation.print_equation(group_terms),
        }
        if degree == 1:
            entry["degenerate"] = True
            entry["note"] = (
                "degenerate: term is f(x) alone; no exponent structure to analyze"
            )
            groups.append(entry)
            continue
        entry["degenerate"] = False
        rows = [(t.p, t.q) for t in group_terms]
        condition = equation.check_condition_C(rows)
        entry["condition"] = {
            "distinct_p": condition.distinct_p,
            "distinct_q": condition.distinct_q,
            "common_product": condition.common_product,
            "degree": condition.degree,
            "valid": condition.valid,
            "problems": condition.problems(),
        }
        if not condition.valid:
            exit_code = 2
            groups.append(entry)
            continue
        profile = ExponentProfile.from_terms(group_terms)
        entry.update(_group_analysis(profile, k, real_mode))
        groups.append(entry)
    report["groups"] = groups
    report["provenance"] = PROVENANCE
    return report, exit_code


def _group_analysis(profile: ExponentProfile, k: int | None, real_mode: bool) -> dict:
    n = profile.n
    entry: dict[str, Any] = {
        "profile": {
            "rows": [list(r) for r in profile.rows],
            "names": list(profile.names),
        },
    }
    dependence = symmetrize.evaluate_pattern(
        profile, BlockPattern.of({"x": 1, "1": profile.N - 1})
    )
    pair = symmetrize.evaluate_pattern(
        profile, BlockPattern.of({"x": 1, "y": 1, "1": profile.N - 2})
    )
    entry["identities"] = {
        "dependence": dependence.render(),
        "pair": pair.render(),
    }
    k_used = k if k is not None else max(1, n - 1)
    system = ansatz.extract_constraints(profile, k_used)
    entry["constraints"] = {
        "k": k_used,
        "entries": [
            {"monomial": mono_text, "vanishes": poly_text}
            for mono_text, poly_text in system.rendered()
        ],
    }
    entry["families"] = [
        {
            "blocks": [list(block) for block in fam.blocks],
            "irreducible": fam.irreducible,
            "shares_first_row": fam.shares_row1,
            "constraints": [fam.constraint_text(j) for j in range(fam.k)],
            "text": fam.render(),
        }
        for fam in ansatz.solution_families(profile)
    ]
    all_even = equation.real_even_note(profile)
    entry["real_even"] = {
        "all_outer_powers_even": all_even,
        "note": (
            "every outer power is even: all real-valued additive solutions are identically zero"
            if all_even
            else None
        ),
    }
    if real_mode:
        entry["real_specialization"] = {
            "homomorphism": "identity",
            "solution_form": "f_i(x) = c_i*x",
            "constraint": _real_constraint_text(profile),
            "note": (
                "real-valued additive solutions are f_i(x) = c_i*x with the stated "
                "power-sum constraint; they are automatically continuous (in fact analytic)"
            ),
        }
    return entry


def _real_constraint_text(profile: ExponentProfile) -> str:
    parts = []
    for i, (_, q) in enumerate(profile.rows, start=1):
        parts.append(f"c{i}" if q == 1 else f"c{i}^{q}")
    return " + ".join(parts) + " = 0"


# -- verify ------------------------------------------------------------------


def verify_report(
    text: str,
    terms: list[EquationTerm],
    cand: verify.Candidate,
    mode: str,
    bindings: fieldlab.Bindings | None,
    options: Mapping[str, Any],
) -> tuple[dict, int]:
    report = base_report("verify", options)
    report["equation"] = {
        "input": text,
        "canonical": equation.print_equation(terms),
    }
    report["mode"] = mode
    profile = ExponentProfile.from_terms(terms)
    report["candidates"] = {
        name: row.render() for name, row in zip(cand.names, cand.rows)
    }
    ok = True
    if mode in ("symbolic", "both"):
        residual = verify.check_equation(profile, cand)
        expansions = verify.row_expansions(profile, cand)
        dependence = verify.check_pattern_identity(
            profile, cand, BlockPattern.of({"x": 1, "1": profile.N - 1})
        )
        classes = verify.classify_candidate(cand)
        report["symbolic"] = {
            "residual": residual.render(),
            "residual_is_zero": residual.is_zero,
            "row_expansions": {
                name: poly.render() for name, poly in zip(cand.names, expansions)
            },
            "classification": {
                name: cls.value for name, cls in zip(cand.names, classes)
            },
            "dependence_residual": dependence.render(),
            "dependence_residual_is_zero": dependence.is_zero,
        }
        ok = ok and residual.is_zero
    if mode in ("oracle", "both"):
        if bindings is None:
            bindings = fieldlab.default_bindings(cand.universe)
        seed = options.get("seed", fieldlab.DEFAULT_SEED)
        count = options.get("samples", fieldlab.DEFAULT_SAMPLES)
        points = fieldlab.sample_points(bindings, count, seed)
        pairs = fieldlab.sample_pairs(bindings, count, seed)
        eq_verdict = fieldlab.equation_oracle(profile, cand, bindings, points)
        additivity = {}
        for name, row in zip(cand.names, cand.rows):
            verdict = fieldlab.additivity_oracle(row, bindings, pairs)
            additivity[name] = {
                "holds": verdict.holds,
                "witness": (
                    [str(verdict.witness[0]), str(verdict.witness[1])]
                    if verdict.witness
                    else None
                ),
                "defect": str(verdict.defect) if verdict.defect is not None else None,
            }
        report["oracle"] = {
            "field": bindings.field.name,
            "bindings": {
                **{f"phi{j}": c for j, c in sorted(bindings.hom_choices.items())},
                **{f"a{r}": c for r, c in sorted(bindings.logderiv_choices.items())},
            },
            "equation": {
                "holds": eq_verdict.holds,
                "witness": str(eq_verdict.witness) if eq_verdict.witness is not None else None,
                "value": str(eq_verdict.value) if eq_verdict.value is not None else None,
            },
            "additivity": additivity,
        }
        ok = ok and eq_verdict.holds
    report["verified"] = ok
    return report, 0 if ok else 3


# -- oracle ------------------------------------------------------------------


def polarization_report(n: int, options: Mapping[str, Any]) -> tuple[dict, int]:
    report = base_report("oracle", options)
    check = symmetrize.polarization_check(n)
    report["oracle"] = "polarization"
    report["polarization"] = {
        "order": check.order,
        "general_identity_holds": check.general_identity_holds,
        "equal_increment_holds": check.equal_increment_holds,
        "vanishing_holds": check.vanishing_holds,
        "verified": check.verified,
        "trace": list(check.trace),
    }
    return report, 0 if check.verified else 3


def bruteforce_report(
    rows: list[tuple[int, int]], pattern: BlockPattern, options: Mapping[str, Any]
) -> tuple[dict, int]:
    report = base_report("oracle", options)
    profile = ExponentProfile.from_rows(rows)
    enumerated = symmetrize.brute_force_pattern(profile, pattern)
    combinatorial = symmetrize.evaluate_pattern(profile, pattern)
    agree = enumerated == combinatorial
    report["oracle"] = "bruteforce"
    report["bruteforce"] = {
        "profile": [list(r) for r in profile.rows],
        "pattern": pattern.render(),
        "enumerated": enumerated.render(),
        "combinatorial": combinatorial.render(),
        "agreement": agree,
    }
    return report, 0 if agree else 3


# -- rendering ----------------------------------------------------------------


def to_json(report: Mapping[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def to_text(report: Mapping[str, Any]) -> str:
    command = report["command"]
    lines: list[str] = []
    if command == "analyze":
        _analyze_text(report, lines)
    elif command == "verify":
        _verify_text(report, lines)
    else:
        _oracle_text(report, lines)
    return "\n".join(lines)


def _analyze_text(report: Mapping[str, Any], lines: list[str]) -> None:
    lines.append(f"equation: {report['equation']['canonical']}")
    for group in report["groups"]:
        lines.append("")
        lines.append(f"degree-{group['degree']} group: {group['terms']}")
        if group.get("degenerate"):
            lines.append(f"  {group['note']}")
            continue
        condition = group["condition"]
        if not condition["valid"]:
            lines.append("  exponent pattern INVALID:")
            for problem in condition["problems"]:
                lines.append(f"    - {problem}")
            continue
        lines.append(
            f"  exponent pattern valid, N = {condition['degree']}; "
            f"rows (p, q) = {group['profile']['rows']}"
        )
        lines.append(f"  dependence identity: {group['identities']['dependence']}")
        lines.append(f"  pair identity:       {group['identities']['pair']}")
        constraints = group["constraints"]
        lines.append(f"  constraint system (k = {constraints['k']}):")
        for entry in constraints["entries"]:
            lines.append(f"    {entry['monomial']}: {entry['vanishes']} = 0")
        lines.append(f"  solution families ({len(group['families'])}):")
        for family in group["families"]:
            lines.append(f"    {family['text']}")
        if group["real_even"]["note"]:
            lines.append(f"  note: {group['real_even']['note']}")
        if "real_specialization" in group:
            spec = group["real_specialization"]
            lines.append(
                f"  real mode: {spec['solution_form']} with {spec['constraint']}; {spec['note']}"
            )


def _verify_text(report: Mapping[str, Any], lines: list[str]) -> None:
    lines.append(f"equation: {report['equation']['canonical']}")
    lines.append("candidates:")
    for name, expr in report["candidates"].items():
        lines.append(f"  {name} = {expr}")
    if "symbolic" in report:
        sym = report["symbolic"]
        lines.append("symbolic:")
        lines.append(f"  equation residual: {sym['residual']}")
        for name, text in sym["row_expansions"].items():
            lines.append(f"  expansion[{name}]: {text}")
        for name, cls in sym["classification"].items():
            lines.append(f"  class[{name}]: {cls}")
        lines.append(f"  dependence-identity residual: {sym['dependence_residual']}")
    if "oracle" in report:
        oracle = report["oracle"]
        lines.append(f"oracle over {oracle['field']}:")
        lines.append(f"  equation: {'holds' if oracle['equation']['holds'] else 'FAILS'}")
        if not oracle["equation"]["holds"]:
            lines.append(
                f"    witness {oracle['equation']['witness']} -> {oracle['equation']['value']}"
            )
        for name, verdict in oracle["additivity"].items():
            if verdict["holds"]:
                lines.append(f"  additivity[{name}]: holds on all samples")
            else:
                u, v = verdict["witness"]
                lines.append(
                    f"  additivity[{name}]: FAILS at ({u}, {v}), defect {verdict['defect']}"
                )
    lines.append(f"verified: {report['verified']}")


def _oracle_text(report: Mapping[str, Any], lines: list[str]) -> None:
    if report["oracle"] == "polarization":
        data = report["polarization"]
        lines.append(f"polarization check, order {data['order']}:")
        for entry in data["trace"]:
            lines.append(f"  {entry}")
        lines.append(f"verified: {data['verified']}")
    else:
        data = report["bruteforce"]
        lines.append(f"brute-force oracle on profile {data['profile']}, pattern {data['pattern']}")
        lines.append(f"  enumerated:    {data['enumerated']}")
        lines.append(f"  combinatorial: {data['combinatorial']}")
        lines.append(f"agreement: {data['agreement']}")
