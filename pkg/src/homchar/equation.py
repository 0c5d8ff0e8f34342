"""Equation DSL (parser + printer), exponent-profile validation and degree splitting.

The surface syntax mirrors the displayed form of the equations under study::

    equation := term (('+'|'-') term)* '=' '0'
    term     := [scalar '*'] ident ['^' nat] '(' 'x' ['^' nat] ')'
    ident    := letter (letter|digit)*

``scalar`` is an exact complex literal with rational parts: ``3``, ``3/4``,
``2i``, or a parenthesised sum such as ``(1+2i)``; sums must be bracketed so
they cannot be confused with term separators.  Omitted powers default to 1.
An optional sign is accepted before the first term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    EquationSyntaxError,
    InvalidProfileError,
    UnsupportedFormError,
)
from .scalars import GAUSS_ONE, GaussRational


@dataclass(frozen=True)
class EquationTerm:
    """One summand ``sign * (scalar*f)^q (x^p)`` of an equation."""

    name: str
    q: int
    p: int
    sign: int = 1
    scalar: GaussRational | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("term needs a function name")
        if self.p < 1 or self.q < 1:
            raise ValueError("inner and outer powers must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def degree(self) -> int:
        return self.p * self.q

    def multiplier(self) -> GaussRational:
        """The exact factor this term puts on f^q(x^p): sign * scalar^q."""
        value = GaussRational.of(self.sign)
        if self.scalar is not None:
            value = value * self.scalar**self.q
        return value


# -- tokenizer ----------------------------------------------------------

_SYMBOL_CHARS = "+-*^/()="


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "imag" | one of the symbol characters | "end"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            kind = "int"
            if j < len(text) and text[j] == "i" and not (j + 1 < len(text) and text[j + 1].isalnum()):
                j += 1
                kind = "imag"
            tokens.append(Token(kind, text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and text[j].isalnum():
                j += 1
            tokens.append(Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _SYMBOL_CHARS:
            tokens.append(Token(ch, ch, line, start_col))
            col += 1
            i += 1
            continue
        raise EquationSyntaxError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("end", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, tokens: Sequence[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            want = what or f"{kind!r}"
            raise EquationSyntaxError(
                f"expected {want}, found {tok.text!r}" if tok.text else f"expected {want}",
                tok.line,
                tok.col,
            )
        return self.next()


# -- parser -------------------------------------------------------------


def _parse_nat(stream: TokenStream, what: str) -> int:
    tok = stream.expect("int", what)
    value = int(tok.text)
    if value < 1:
        raise EquationSyntaxError(f"{what} must be positive", tok.line, tok.col)
    return value


def _parse_rational(stream: TokenStream) -> Fraction:
    negative = False
    if stream.peek().kind == "-":
        stream.next()
        negative = True
    tok = stream.expect("int", "a number")
    value = Fraction(int(tok.text))
    if stream.peek().kind == "/":
        stream.next()
        den = stream.expect("int", "a denominator")
        if int(den.text) == 0:
            raise EquationSyntaxError("zero denominator", den.line, den.col)
        value /= int(den.text)
    return -value if negative else value


def _parse_scalar_atom(stream: TokenStream) -> GaussRational:
    tok = stream.peek()
    if tok.kind == "ident" and tok.text == "i":
        stream.next()
        return GaussRational(Fraction(0), Fraction(1))
    if tok.kind == "imag":
        stream.next()
        base = Fraction(int(tok.text[:-1]))
        if stream.peek().kind == "/":
            stream.next()
            den = stream.expect("int", "a denominator")
            base /= int(den.text)
        return GaussRational(Fraction(0), base)
    value = _parse_rational(stream)
    if stream.peek().kind == "imag" or (
        stream.peek().kind == "ident" and stream.peek().text == "i"
    ):
        tok = stream.next()
        imag = Fraction(int(tok.text[:-1])) if tok.kind == "imag" else Fraction(1)
        return GaussRational(Fraction(0), value * imag)
    return GaussRational(value)


def _parse_scalar(stream: TokenStream) -> GaussRational:
    if stream.peek().kind == "(":
        stream.next()
        total = _parse_scalar_atom(stream)
        while stream.peek().kind in ("+", "-"):
            op = stream.next().kind
            atom = _parse_scalar_atom(stream)
            total = total + atom if op == "+" else total - atom
        stream.expect(")")
        return total
    return _parse_scalar_atom(stream)


def _scalar_starts_here(stream: TokenStream) -> bool:
    tok = stream.peek()
    if tok.kind in ("int", "imag", "("):
        return True
    # a bare `i*` is the imaginary unit, not a function named i
    return tok.kind == "ident" and tok.text == "i" and stream.peek(1).kind == "*"


def _parse_term(stream: TokenStream, sign: int) -> EquationTerm:
    scalar = None
    if _scalar_starts_here(stream):
        scalar = _parse_scalar(stream)
        stream.expect("*", "'*' after the scalar")
    name_tok = stream.expect("ident", "a function name")
    q = 1
    if stream.peek().kind == "^":
        stream.next()
        q = _parse_nat(stream, "an outer power")
    stream.expect("(", "'('")
    var_tok = stream.expect("ident", "the variable x")
    if var_tok.text != "x":
        raise EquationSyntaxError(
            f"only the variable 'x' is supported, found {var_tok.text!r}",
            var_tok.line,
            var_tok.col,
        )
    p = 1
    if stream.peek().kind == "^":
        stream.next()
        p = _parse_nat(stream, "an inner power")
    stream.expect(")")
    return EquationTerm(name_tok.text, q=q, p=p, sign=sign, scalar=scalar)


def parse_equation(text: str) -> list[EquationTerm]:
    """Parse ``sum of terms = 0`` into its term list.

    Raises EquationSyntaxError with position info on malformed input and
    UnsupportedFormError when the right-hand side is not the literal 0.
    """
    if not text.strip():
        raise EquationSyntaxError("empty equation", 1, 1)
    stream = TokenStream(tokenize(text))
    terms: list[EquationTerm] = []
    sign = 1
    if stream.peek().kind in ("+", "-"):
        sign = -1 if stream.next().kind == "-" else 1
    terms.append(_parse_term(stream, sign))
    while stream.peek().kind in ("+", "-"):
        sign = -1 if stream.next().kind == "-" else 1
        terms.append(_parse_term(stream, sign))
    eq_tok = stream.expect("=", "'+' , '-' or '='")
    rhs = stream.peek()
    if rhs.kind != "int" or rhs.text != "0":
        raise UnsupportedFormError(
            f"right-hand side must be the literal 0 (line {rhs.line}, column {rhs.col})"
        )
    stream.next()
    stream.expect("end", "end of input")
    names = [t.name for t in terms]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise UnsupportedFormError(f"function name {dup!r} appears in more than one term")
    del eq_tok
    return terms


def print_equation(terms: Sequence[EquationTerm]) -> str:
    """Canonical text for a term list; parse(print(terms)) == terms."""
    if not terms:
        raise ValueError("cannot print an empty equation")
    pieces: list[str] = []
    for idx, term in enumerate(terms):
        body = term.name
        if term.q != 1:
            body += f"^{term.q}"
        body += f"(x^{term.p})" if term.p != 1 else "(x)"
        if term.scalar is not None:
            scalar_text = str(term.scalar)
            if term.scalar.re != 0 and term.scalar.im != 0 or scalar_text.startswith("-"):
                scalar_text = f"({scalar_text})"
            body = f"{scalar_text}*{body}"
        if idx == 0:
            pieces.append(body if term.sign == 1 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if term.sign == 1 else f"- {body}")
    return " ".join(pieces) + " = 0"


# -- exponent profiles ----------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the exponent-pattern check on a list of (p, q) rows."""

    distinct_p: bool
    distinct_q: bool
    common_product: bool
    degree: int | None
    degree_exceeds_one: bool

    @property
    def valid(self) -> bool:
        return (
            self.distinct_p
            and self.distinct_q
            and self.common_product
            and self.degree_exceeds_one
        )

    def problems(self) -> list[str]:
        out = []
        if not self.distinct_p:
            out.append("inner powers p are not pairwise distinct")
        if not self.distinct_q:
            out.append("outer powers q are not pairwise distinct")
        if not self.common_product:
            out.append("products p*q do not share a common value")
        if self.common_product and not self.degree_exceeds_one:
            out.append("common degree N must exceed 1")
        return out


def check_condition_C(rows: Sequence[tuple[int, int]]) -> ValidationReport:
    """Report whether rows have distinct p, distinct q and a common product N > 1."""
    if not rows:
        raise ValueError("need at least one row")
    ps = [p for p, _ in rows]
    qs = [q for _, q in rows]
    products = {p * q for p, q in rows}
    common = len(products) == 1
    degree = products.pop() if common else None
    return ValidationReport(
        distinct_p=len(set(ps)) == len(ps),
        distinct_q=len(set(qs)) == len(qs),
        common_product=common,
        degree=degree,
        degree_exceeds_one=degree is not None and degree > 1,
    )


@dataclass(frozen=True)
class ExponentProfile:
    """Validated exponent rows (p_i, q_i), sorted by ascending q, with row metadata."""

    rows: tuple[tuple[int, int], ...]
    N: int
    names: tuple[str, ...]
    signs: tuple[int, ...]
    scalars: tuple[GaussRational | None, ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    def row_multiplier(self, i: int) -> GaussRational:
        value = GaussRational.of(self.signs[i])
        if self.scalars[i] is not None:
            value = value * self.scalars[i] ** self.rows[i][1]
        return value

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[tuple[int, int]],
        names: Sequence[str] | None = None,
        signs: Sequence[int] | None = None,
        scalars: Sequence[GaussRational | None] | None = None,
    ) -> "ExponentProfile":
        rows = list(rows)
        report = check_condition_C(rows)
        if not report.valid:
            raise InvalidProfileError("; ".join(report.problems()))
        n = len(rows)
        names = list(names) if names is not None else [f"f{i}" for i in range(1, n + 1)]
        signs = list(signs) if signs is not None else [1] * n
        scalars = list(scalars) if scalars is not None else [None] * n
        if not (len(names) == len(signs) == len(scalars) == n):
            raise ValueError("row metadata length mismatch")
        order = sorted(range(n), key=lambda i: rows[i][1])
        return cls(
            rows=tuple(rows[i] for i in order),
            N=report.degree,  # type: ignore[arg-type]
            names=tuple(names[i] for i in order),
            signs=tuple(signs[i] for i in order),
            scalars=tuple(scalars[i] for i in order),
        )

    @classmethod
    def from_terms(cls, terms: Sequence[EquationTerm]) -> "ExponentProfile":
        return cls.from_rows(
            [(t.p, t.q) for t in terms],
            names=[t.name for t in terms],
            signs=[t.sign for t in terms],
            scalars=[t.scalar for t in terms],
        )


def degree_split(terms: Sequence[EquationTerm]) -> list[tuple[int, list[EquationTerm]]]:
    """Group terms by their degree p*q, ascending.

    Scaling x by a rational r multiplies each term by r^(p*q), so terms of
    different degree must vanish independently; each group is a stand-alone
    sub-equation.  A group of degree 1 (a lone f(x)) carries no structure
    and is reported as degenerate by the analysis layer.
    """
    groups: dict[int, list[EquationTerm]] = {}
    for term in terms:
        groups.setdefault(term.degree, []).append(term)
    return [(degree, groups[degree]) for degree in sorted(groups)]


def real_even_note(profile: ExponentProfile) -> bool:
    """True iff every outer power is even.

    In that case each summand of a real-valued solution is a square, so the
    sum can only vanish if every function is identically zero.
    """
    return all(q % 2 == 0 for _, q in profile.rows)
