"""Symbolic verification of candidate solutions.

A candidate assigns each unknown function a polynomial in the formal
symbols phi_j(x) (multiplicative) and a_r(x) (logarithmic-derivative
style).  Substituting into the equation and reducing with the rewrite
rules

    phi_j(x^k) = phi_j(x)^k      a_r(x^k) = k * a_r(x)
    phi_j(1)   = 1               a_r(1)   = 0

yields an exact residual polynomial.  A zero residual means the candidate
satisfies the equation identically whenever the bound symbols are
algebraically independent; nonzero residuals are returned as-is, since
they are informative in their own right.  Additivity of a candidate is not
decidable in this algebra (the symbols only see the multiplicative
structure) and is delegated to the exact field oracle.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .equation import ExponentProfile, TokenStream, tokenize
from .errors import EquationSyntaxError, UnsupportedFormError
from .expr import (
    Kind,
    SymbolId,
    SymbolUniverse,
    SymPoly,
    eval_at_one,
    hom,
    logderiv,
    poly_pow,
    substitute_power,
    substitute_symbols,
    transport,
)
from .scalars import GaussRational
from .symmetrize import AbstractIdentity, BlockPattern, evaluate_pattern

_SYMBOL_RE = re.compile(r"\b(phi|a)(\d+)\b")

_TOKEN_BASE_VARS = {"x": 1, "y": 2, "z": 3}


@dataclass(frozen=True)
class Candidate:
    """One expression per equation row, all over a shared symbol universe."""

    universe: SymbolUniverse
    names: tuple[str, ...]
    rows: tuple[SymPoly, ...]

    def row(self, name: str) -> SymPoly:
        return self.rows[self.names.index(name)]


def candidate_universe(*texts: str) -> SymbolUniverse:
    """The universe spanned by every phi<j>/a<r> mentioned in the given sources."""
    symbols: set[SymbolId] = set()
    for text in texts:
        for stem, index in _SYMBOL_RE.findall(text):
            maker = hom if stem == "phi" else logderiv
            symbols.add(maker(int(index)))
    return SymbolUniverse.of(symbols)


def parse_candidate_expr(text: str, universe: SymbolUniverse | None = None) -> SymPoly:
    """Parse one candidate expression: symbols, rational/complex literals, + - * ^ ()."""
    if universe is None:
        universe = candidate_universe(text)
    stream = TokenStream(tokenize(text))
    poly = _parse_sum(stream, universe)
    stream.expect("end", "end of expression")
    return poly


def _parse_sum(stream: TokenStream, universe: SymbolUniverse) -> SymPoly:
    poly = _parse_product(stream, universe)
    while stream.peek().kind in ("+", "-"):
        op = stream.next().kind
        rhs = _parse_product(stream, universe)
        poly = poly + rhs if op == "+" else poly - rhs
    return poly


def _parse_product(stream: TokenStream, universe: SymbolUniverse) -> SymPoly:
    negate = False
    while stream.peek().kind == "-":
        stream.next()
        negate = not negate
    poly = _parse_factor(stream, universe)
    while stream.peek().kind == "*":
        stream.next()
        poly = poly * _parse_factor(stream, universe)
    return poly.scale(-1) if negate else poly


def _parse_factor(stream: TokenStream, universe: SymbolUniverse) -> SymPoly:
    poly = _parse_atom(stream, universe)
    if stream.peek().kind == "^":
        stream.next()
        exp_tok = stream.expect("int", "an exponent")
        poly = poly_pow(poly, int(exp_tok.text))
    return poly


def _parse_atom(stream: TokenStream, universe: SymbolUniverse) -> SymPoly:
    tok = stream.peek()
    if tok.kind == "(":
        stream.next()
        poly = _parse_sum(stream, universe)
        stream.expect(")")
        return poly
    if tok.kind == "int":
        stream.next()
        value = Fraction(int(tok.text))
        if stream.peek().kind == "/":
            stream.next()
            den = stream.expect("int", "a denominator")
            if int(den.text) == 0:
                raise EquationSyntaxError("zero denominator", den.line, den.col)
            value /= int(den.text)
        return SymPoly.constant(universe, value)
    if tok.kind == "imag":
        stream.next()
        base = Fraction(int(tok.text[:-1]))
        return SymPoly.constant(universe, GaussRational(Fraction(0), base))
    if tok.kind == "ident":
        stream.next()
        if tok.text == "i":
            return SymPoly.constant(universe, GaussRational(Fraction(0), Fraction(1)))
        match = _SYMBOL_RE.fullmatch(tok.text)
        if not match:
            raise EquationSyntaxError(
                f"unknown symbol {tok.text!r} (expected phi<j>, a<r>, or a literal)",
                tok.line,
                tok.col,
            )
        maker = hom if match.group(1) == "phi" else logderiv
        return SymPoly.from_symbol(universe, maker(int(match.group(2))))
    raise EquationSyntaxError(f"unexpected {tok.text!r}", tok.line, tok.col)


def parse_candidate_file(text: str, profile: ExponentProfile) -> Candidate:
    """Parse ``name = expression`` lines ('#' comments) into a Candidate.

    Every profile row must be assigned exactly once.
    """
    assignments: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise EquationSyntaxError("expected 'name = expression'", lineno, 1)
        name, _, expr = line.partition("=")
        name = name.strip()
        if name in assignments:
            raise UnsupportedFormError(f"candidate {name!r} assigned twice")
        assignments[name] = expr.strip()
    missing = [n for n in profile.names if n not in assignments]
    if missing:
        raise UnsupportedFormError(f"no candidate for {missing}")
    extra = [n for n in assignments if n not in profile.names]
    if extra:
        raise UnsupportedFormError(f"candidates {extra} match no equation term")
    universe = candidate_universe(*assignments.values())
    rows = tuple(parse_candidate_expr(assignments[n], universe) for n in profile.names)
    return Candidate(universe, tuple(profile.names), rows)


def candidate_from_exprs(names: Sequence[str], exprs: Sequence[str]) -> Candidate:
    universe = candidate_universe(*exprs)
    rows = tuple(parse_candidate_expr(e, universe) for e in exprs)
    return Candidate(universe, tuple(names), rows)


# -- equation and identity residuals ---------------------------------------


def row_expansions(profile: ExponentProfile, cand: Candidate) -> list[SymPoly]:
    """The expanded value of each summand: multiplier * cand_i(x^{p_i})^{q_i}."""
    if len(cand.rows) != profile.n:
        raise UnsupportedFormError(
            f"candidate has {len(cand.rows)} rows, equation has {profile.n}"
        )
    out = []
    for i, (p, q) in enumerate(profile.rows):
        expanded = poly_pow(substitute_power(cand.rows[i], 1, p), q)
        out.append(expanded.scale(profile.row_multiplier(i)))
    return out


def check_equation(profile: ExponentProfile, cand: Candidate) -> SymPoly:
    """Exact residual of the equation at the candidate; zero iff it solves it."""
    residual = SymPoly.zero(cand.universe)
    for expansion in row_expansions(profile, cand):
        residual = residual + expansion
    return residual


def _pattern_universe(cand: Candidate, token_order: tuple[str, ...]) -> SymbolUniverse:
    symbols = list(cand.universe.symbols)
    for sym in cand.universe.symbols:
        for token in token_order:
            symbols.append(SymbolId(sym.kind, sym.index, _TOKEN_BASE_VARS[token]))
    return SymbolUniverse.of(symbols, cand.universe.unknowns)


def _apply_to_monomial(
    row_poly: SymPoly,
    mono,
    token_order: tuple[str, ...],
    target: SymbolUniverse,
) -> SymPoly:
    """cand_i evaluated at the group element x^a y^b ... (all exponents in mono)."""
    mapping: dict[SymbolId, SymPoly] = {}
    for sym in row_poly.universe.symbols:
        if sym.kind == Kind.HOM:
            replacement = SymPoly.constant(target, 1)
            for token, e in zip(token_order, mono):
                if e:
                    base = SymbolId(Kind.HOM, sym.index, _TOKEN_BASE_VARS[token])
                    replacement = replacement * SymPoly.from_symbol(target, base, e)
        else:
            replacement = SymPoly.zero(target)
            for token, e in zip(token_order, mono):
                if e:
                    base = SymbolId(Kind.LOGDERIV, sym.index, _TOKEN_BASE_VARS[token])
                    replacement = replacement + SymPoly.from_symbol(target, base).scale(e)
        mapping[sym] = replacement
    return substitute_symbols(row_poly, mapping, target)


def check_pattern_identity(
    profile: ExponentProfile, cand: Candidate, pattern: BlockPattern
) -> SymPoly:
    """Exact residual of the pattern identity at the candidate.

    Factors f_i(m) expand by applying the candidate to the monomial m;
    f_i(1) factors evaluate through phi(1) = 1, a(1) = 0.
    """
    identity = evaluate_pattern(profile, pattern)
    return substitute_into_identity(identity, cand)


def substitute_into_identity(identity: AbstractIdentity, cand: Candidate) -> SymPoly:
    token_order = identity.token_order
    target = _pattern_universe(cand, token_order)
    at_one = [transport(eval_at_one(row, 1), target) for row in cand.rows]
    cache: dict[tuple[int, tuple[int, ...]], SymPoly] = {}
    residual = SymPoly.zero(target)
    for (row, factors), coeff in identity.sorted_terms():
        term = SymPoly.constant(target, coeff)
        for mono in factors:
            if not any(mono):
                term = term * at_one[row]
                continue
            key = (row, tuple(mono))
            if key not in cache:
                cache[key] = _apply_to_monomial(cand.rows[row], mono, token_order, target)
            term = term * cache[key]
        residual = residual + term
    return residual


# -- classification ---------------------------------------------------------


class RowClass(enum.Enum):
    HOM_COMBINATION = "HomCombination"
    POLYNOMIAL_TIMES_HOM = "PolynomialTimesHom"
    MIXED = "Mixed"


def classify_candidate(cand: Candidate) -> tuple[RowClass, ...]:
    """Label each row by its structural shape.

    HomCombination: a linear combination of single first-power phi symbols.
    PolynomialTimesHom: one fixed phi symbol (first power) times a polynomial
    in the a-symbols.  Everything else is Mixed.
    """
    out = []
    for poly in cand.rows:
        out.append(_classify_row(poly))
    return tuple(out)


def _classify_row(poly: SymPoly) -> RowClass:
    if poly.is_zero:
        return RowClass.HOM_COMBINATION
    hom_positions = [
        pos for pos, sym in enumerate(poly.universe.symbols) if sym.kind == Kind.HOM
    ]
    log_positions = [
        pos for pos, sym in enumerate(poly.universe.symbols) if sym.kind == Kind.LOGDERIV
    ]
    hom_parts = set()
    max_log_degree = 0
    simple_homs = True
    for mono in poly.terms:
        hom_part = tuple(mono[pos] for pos in hom_positions)
        hom_parts.add(hom_part)
        if sum(hom_part) != 1 or max(hom_part, default=0) != 1:
            simple_homs = False
        max_log_degree = max(max_log_degree, sum(mono[pos] for pos in log_positions))
    if max_log_degree == 0 and simple_homs:
        return RowClass.HOM_COMBINATION
    if simple_homs and len(hom_parts) == 1:
        return RowClass.POLYNOMIAL_TIMES_HOM
    return RowClass.MIXED
