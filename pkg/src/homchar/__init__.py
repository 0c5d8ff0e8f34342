"""Symbolic analysis of power-sum functional equations for additive unknowns.

Given an equation  sum_i f_i^(q_i)(x^(p_i)) = 0  with pairwise distinct
inner and outer powers sharing a common product N > 1, this package derives
the exact identities satisfied by the unknowns, extracts the polynomial
constraint system on homomorphism-basis coefficients, enumerates the
partition-structured solution families, and verifies candidate solutions
both symbolically and against exact-arithmetic field oracles.
"""

from .equation import (
    EquationTerm,
    ExponentProfile,
    ValidationReport,
    check_condition_C,
    degree_split,
    parse_equation,
    print_equation,
    real_even_note,
)
from .expr import (
    Kind,
    MultiIndex,
    SymbolId,
    SymbolUniverse,
    SymPoly,
    UnknownPoly,
    collect_coefficients,
    eval_at_one,
    hom,
    logderiv,
    poly_arith,
    poly_pow,
    substitute_power,
)
from .scalars import GaussRational, Rational
from .symmetrize import (
    AbstractIdentity,
    BlockPattern,
    brute_force_pattern,
    eliminate_dependence,
    evaluate_pattern,
    pattern_weight,
    polarization_check,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractIdentity",
    "BlockPattern",
    "EquationTerm",
    "ExponentProfile",
    "GaussRational",
    "Kind",
    "MultiIndex",
    "Rational",
    "SymbolId",
    "SymbolUniverse",
    "SymPoly",
    "UnknownPoly",
    "ValidationReport",
    "brute_force_pattern",
    "check_condition_C",
    "collect_coefficients",
    "degree_split",
    "eliminate_dependence",
    "eval_at_one",
    "evaluate_pattern",
    "hom",
    "logderiv",
    "parse_equation",
    "pattern_weight",
    "polarization_check",
    "poly_arith",
    "poly_pow",
    "print_equation",
    "real_even_note",
    "substitute_power",
]
