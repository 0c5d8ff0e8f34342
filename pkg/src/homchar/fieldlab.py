"""Exact concrete fields serving as the semantic oracle for the symbolic layer.

Two characteristic-0 fields are available:

* ``Q(sqrt(d))`` for a square-free d > 1, with the identity and conjugation
  embeddings -- two genuinely distinct field homomorphisms into the reals.
* ``Q(t)``, rational functions over the rationals, with the formal
  derivative d/dt.  The logarithmic derivative a(x) = d(x)/x is additive on
  the multiplicative group and realizes the a-symbols.

Everything is computed in exact rational arithmetic, so the oracle verdicts
(equation residuals, additivity defects) are equalities, not approximations.
Rational-function degrees are capped during evaluation; blowing past the cap
raises instead of truncating.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .equation import ExponentProfile
from .errors import BindingError, DomainEvalError, ResourceCapError, UnsupportedFormError
from .expr import Kind, SymbolUniverse, SymPoly
from .scalars import GaussRational

MAX_RATFUNC_DEGREE = 24
DEFAULT_SEED = 42
DEFAULT_SAMPLES = 32


# -- Q(sqrt(d)) --------------------------------------------------------------


def _is_square_free(d: int) -> bool:
    if d < 2:
        return False
    n, f = d, 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        while n % f == 0:
            n //= f
        f += 1
    return True


@dataclass(frozen=True)
class QuadExtElem:
    """a + b*sqrt(d) with rational a, b over the fixed square-free d."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if not _is_square_free(self.d):
            raise ValueError(f"{self.d} is not square-free and > 1")

    def _check(self, other: "QuadExtElem") -> None:
        if self.d != other.d:
            raise ValueError("elements of different quadratic fields")

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def conjugate(self) -> "QuadExtElem":
        return QuadExtElem(self.a, -self.b, self.d)

    def __add__(self, other: "QuadExtElem") -> "QuadExtElem":
        self._check(other)
        return QuadExtElem(self.a + other.a, self.b + other.b, self.d)

    def __neg__(self) -> "QuadExtElem":
        return QuadExtElem(-self.a, -self.b, self.d)

    def __sub__(self, other: "QuadExtElem") -> "QuadExtElem":
        return self + (-other)

    def __mul__(self, other: "QuadExtElem") -> "QuadExtElem":
        self._check(other)
        return QuadExtElem(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    def inverse(self) -> "QuadExtElem":
        norm = self.a * self.a - self.d * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("zero has no inverse")
        return QuadExtElem(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other: "QuadExtElem") -> "QuadExtElem":
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "QuadExtElem":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QuadExtElem(Fraction(1), Fraction(0), self.d)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.d})"
        tail = root if abs(self.b) == 1 else f"{abs(self.b)}*{root}"
        if self.a == 0:
            return tail if self.b > 0 else f"-{tail}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {tail}"


def embed_quad(e: QuadExtElem, conj: bool) -> QuadExtElem:
    """The identity embedding or the conjugation a + b*sqrt(d) -> a - b*sqrt(d)."""
    return e.conjugate() if conj else e


# -- Q(t) ---------------------------------------------------------------------

# Dense univariate polynomials over Fraction, lowest degree first, no
# trailing zeros; the zero polynomial is the empty tuple.
Poly = tuple[Fraction, ...]


def _p_trim(coeffs: Sequence[Fraction]) -> Poly:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def _p_add(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _p_trim(out)


def _p_neg(a: Poly) -> Poly:
    return tuple(-c for c in a)

def _p_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _p_trim(out)


def _p_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    lead = b[-1]
    while len(rem) >= len(b) and _p_trim(rem):
        rem = list(_p_trim(rem))
        if len(rem) < len(b):
            break
        shift = len(rem) - len(b)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] -= factor * c
        rem = rem[:-1]
    return _p_trim(quot), _p_trim(rem)


def _p_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        _, r = _p_divmod(a, b)
        a, b = b, r
    if not a:
        return ()
    lead = a[-1]
    return tuple(c / lead for c in a)


def _p_deriv(a: Poly) -> Poly:
    return _p_trim([a[i] * i for i in range(1, len(a))])


def _p_degree(a: Poly) -> int:
    return len(a) - 1 if a else 0


@dataclass(frozen=True)
class RatFunc:
    """A reduced rational function num/den over Q, den monic and nonzero."""

    num: Poly
    den: Poly

    @classmethod
    def make(cls, num: Iterable, den: Iterable = (1,)) -> "RatFunc":
        n = _p_trim([Fraction(c) for c in num])
        d = _p_trim([Fraction(c) for c in den])
        if not d:
            raise ZeroDivisionError("zero denominator")
        if not n:
            return cls((), (Fraction(1),))
        g = _p_gcd(n, d)
        if _p_degree(g) > 0:
            n, _ = _p_divmod(n, g)
            d, _ = _p_divmod(d, g)
        lead = d[-1]
        n = tuple(c / lead for c in n)
        d = tuple(c / lead for c in d)
        if max(_p_degree(n), _p_degree(d)) > MAX_RATFUNC_DEGREE:
            raise ResourceCapError(
                f"rational function degree exceeds the evaluation cap {MAX_RATFUNC_DEGREE}"
            )
        return cls(n, d)

    @classmethod
    def t(cls) -> "RatFunc":
        return cls.make((0, 1))

    @classmethod
    def const(cls, value) -> "RatFunc":
        return cls.make((Fraction(value),))

    @property
    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(
            _p_add(_p_mul(self.num, other.den), _p_mul(other.num, self.den)),
            _p_mul(self.den, other.den),
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(_p_neg(self.num), self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(_p_mul(self.num, other.num), _p_mul(self.den, other.den))

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise ZeroDivisionError("zero has no inverse")
        return RatFunc.make(self.den, self.num)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "RatFunc":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = RatFunc.const(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __str__(self) -> str:
        def poly_text(p: Poly) -> str:
            if not p:
                return "0"
            pieces = []
            for i in range(len(p) - 1, -1, -1):
                c = p[i]
                if c == 0:
                    continue
                if i == 0:
                    body = str(abs(c))
                else:
                    t = "t" if i == 1 else f"t^{i}"
                    body = t if abs(c) == 1 else f"{abs(c)}*{t}"
                if not pieces:
                    pieces.append(body if c > 0 else f"-{body}")
                else:
                    pieces.append(f"+ {body}" if c > 0 else f"- {body}")
            return " ".join(pieces)

        if self.den == (Fraction(1),):
            return poly_text(self.num)
        return f"({poly_text(self.num)})/({poly_text(self.den)})"


def derive_ratfunc(r: RatFunc) -> RatFunc:
    """Formal d/dt via the quotient rule; additive and Leibniz, exactly."""
    num = _p_add(
        _p_mul(_p_deriv(r.num), r.den),
        _p_neg(_p_mul(r.num, _p_deriv(r.den))),
    )
    return RatFunc.make(num, _p_mul(r.den, r.den))


FieldElem = Union[QuadExtElem, RatFunc]


# -- fields and bindings ------------------------------------------------------


class QuadField:
    """Q(sqrt(d)) with the identity and conjugation embeddings."""

    def __init__(self, d: int):
        if not _is_square_free(d):
            raise ValueError(f"{d} is not square-free and > 1")
        self.d = d

    @property
    def name(self) -> str:
        return f"Q(sqrt({self.d}))"

    def from_rational(self, value: Fraction) -> QuadExtElem:
        return QuadExtElem(Fraction(value), Fraction(0), self.d)

    def sqrt_generator(self) -> QuadExtElem:
        return QuadExtElem(Fraction(0), Fraction(1), self.d)

    def apply_hom(self, choice: str, value: QuadExtElem) -> QuadExtElem:
        if choice == "id":
            return value
        if choice == "conj":
            return value.conjugate()
        raise BindingError(f"unknown embedding {choice!r} for {self.name}")

    def apply_logderiv(self, choice: str, value: QuadExtElem) -> QuadExtElem:
        raise BindingError(
            f"{self.name} carries no nontrivial derivation; bind a-symbols over Q(t)"
        )

    def random_element(self, rng: random.Random) -> QuadExtElem:
        while True:
            a = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            b = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            if a != 0 or b != 0:
                return QuadExtElem(a, b, self.d)


class RationalFunctionField:
    """Q(t) with the derivation d/dt and the logarithmic derivative."""

    @property
    def name(self) -> str:
        return "Q(t)"

    def from_rational(self, value: Fraction) -> RatFunc:
        return RatFunc.const(value)

    def apply_hom(self, choice: str, value: RatFunc) -> RatFunc:
        if choice == "id":
            return value
        raise BindingError(f"only the identity embedding is available on {self.name}")

    def apply_logderiv(self, choice: str, value: RatFunc) -> RatFunc:
        if choice != "dlog":
            raise BindingError(f"unknown derivation binding {choice!r}")
        if value.is_zero:
            raise DomainEvalError("logarithmic derivative needs a nonzero point")
        return derive_ratfunc(value) / value

    def random_element(self, rng: random.Random) -> RatFunc:
        while True:
            num = [Fraction(rng.randint(-4, 4)) for _ in range(3)]
            den = [Fraction(1), Fraction(rng.randint(0, 2))]
            if any(num):
                return RatFunc.make(num, den)


Field = Union[QuadField, RationalFunctionField]


@dataclass(frozen=True)
class Bindings:
    """Concrete interpretation of the formal symbols over a chosen field."""

    field: Field
    hom_choices: Mapping[int, str]
    logderiv_choices: Mapping[int, str]

    @classmethod
    def from_config(cls, config: Mapping[str, str]) -> "Bindings":
        """Build from the CLI shape: {"field": "Q(t)", "phi1": "id", "a1": "dlog"}."""
        field_text = config.get("field", "Q(t)").replace(" ", "")
        if field_text in ("Q(t)", "Qt"):
            field: Field = RationalFunctionField()
        elif field_text.startswith("Q(sqrt(") and field_text.endswith("))"):
            field = QuadField(int(field_text[7:-2]))
        else:
            raise BindingError(f"unknown field {config.get('field')!r}")
        homs: dict[int, str] = {}
        logs: dict[int, str] = {}
        for key, choice in config.items():
            if key == "field":
                continue
            if key.startswith("phi") and key[3:].isdigit():
                choice_text = choice.replace(" ", "")
                if choice_text.startswith("conj"):
                    choice_text = "conj"
                homs[int(key[3:])] = choice_text
            elif key.startswith("a") and key[1:].isdigit():
                logs[int(key[1:])] = "dlog" if choice.startswith("dlog") else choice
            else:
                raise BindingError(f"unknown binding key {key!r}")
        return cls(field, homs, logs)

    def hom_value(self, index: int, point: FieldElem) -> FieldElem:
        if index not in self.hom_choices:
            raise BindingError(f"no binding for phi{index}")
        return self.field.apply_hom(self.hom_choices[index], point)

    def logderiv_value(self, index: int, point: FieldElem) -> FieldElem:
        if index not in self.logderiv_choices:
            raise BindingError(f"no binding for a{index}")
        return self.field.apply_logderiv(self.logderiv_choices[index], point)


def default_bindings(universe: SymbolUniverse, quad_d: int = 2) -> Bindings:
    """id/conj over Q(sqrt(d)) for pure-homomorphism candidates, Q(t) otherwise."""
    hom_indices = sorted({s.index for s in universe.symbols if s.kind == Kind.HOM})
    log_indices = sorted({s.index for s in universe.symbols if s.kind == Kind.LOGDERIV})
    if log_indices:
        if len(hom_indices) > 1:
            raise BindingError(
                "candidates mixing several phi symbols with a-symbols need explicit bindings"
            )
        return Bindings(
            RationalFunctionField(),
            {j: "id" for j in hom_indices},
            {r: "dlog" for r in log_indices},
        )
    choices = {}
    for pos, j in enumerate(hom_indices):
        if pos > 1:
            raise BindingError("more than two phi symbols need explicit bindings")
        choices[j] = "id" if pos == 0 else "conj"
    return Bindings(QuadField(quad_d), choices, {})


# -- evaluation ---------------------------------------------------------------


def _coeff_to_rational(coeff: GaussRational) -> Fraction:
    if coeff.im != 0:
        raise DomainEvalError(
            "coefficients with an imaginary part are outside the exact oracle fields"
        )
    return coeff.re


def eval_candidate(poly: SymPoly, bindings: Bindings, point: FieldElem) -> FieldElem:
    """Exact value of a candidate expression at a field point under the bindings."""
    field = bindings.field
    total = field.from_rational(Fraction(0))
    sym_values: dict[int, FieldElem] = {}
    for pos, sym in enumerate(poly.universe.symbols):
        if any(mono[pos] for mono in poly.terms):
            if sym.base_var != 1:
                raise BindingError("oracle evaluation expects symbols on the base variable x")
            if sym.kind == Kind.HOM:
                sym_values[pos] = bindings.hom_value(sym.index, point)
            else:
                if getattr(point, "is_zero", False):
                    raise DomainEvalError("logarithmic derivative needs a nonzero point")
                sym_values[pos] = bindings.logderiv_value(sym.index, point)
    for mono, coeff in poly.terms.items():
        if not coeff.is_constant:
            raise DomainEvalError("candidate coefficients must be constants")
        term = field.from_rational(_coeff_to_rational(coeff.constant_value()))
        for pos, e in enumerate(mono):
            if e:
                term = term * sym_values[pos] ** e
        total = total + term
    return total


@dataclass(frozen=True)
class AdditivityVerdict:
    holds: bool
    witness: tuple[FieldElem, FieldElem] | None
    defect: FieldElem | None

    def render(self) -> str:
        if self.holds:
            return "additive on all sampled pairs"
        u, v = self.witness  # type: ignore[misc]
        return f"not additive: f({u} + {v}) - f({u}) - f({v}) = {self.defect}"


def additivity_oracle(
    poly: SymPoly, bindings: Bindings, samples: Sequence[tuple[FieldElem, FieldElem]]
) -> AdditivityVerdict:
    """Exact check of f(u+v) = f(u) + f(v) over the sample pairs."""
    for u, v in samples:
        defect = (
            eval_candidate(poly, bindings, u + v)
            - eval_candidate(poly, bindings, u)
            - eval_candidate(poly, bindings, v)
        )
        if not defect.is_zero:
            return AdditivityVerdict(False, (u, v), defect)
    return AdditivityVerdict(True, None, None)


@dataclass(frozen=True)
class EquationVerdict:
    holds: bool
    witness: FieldElem | None
    value: FieldElem | None

    def render(self) -> str:
        if self.holds:
            return "equation holds exactly at every sample"
        return f"fails at {self.witness}: value {self.value}"


def equation_oracle(
    profile: ExponentProfile,
    cand,
    bindings: Bindings,
    samples: Sequence[FieldElem],
) -> EquationVerdict:
    """Exact check of the full equation at every sample point."""
    if len(cand.rows) != profile.n:
        raise UnsupportedFormError("candidate row count does not match the profile")
    field = bindings.field
    multipliers = []
    for i in range(profile.n):
        multipliers.append(field.from_rational(_coeff_to_rational(profile.row_multiplier(i))))
    for point in samples:
        total = field.from_rational(Fraction(0))
        for i, (p, q) in enumerate(profile.rows):
            inner = point**p
            total = total + multipliers[i] * eval_candidate(cand.rows[i], bindings, inner) ** q
        if not total.is_zero:
            return EquationVerdict(False, point, total)
    return EquationVerdict(True, None, None)


def sample_points(
    bindings: Bindings, count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> list[FieldElem]:
    """Reproducible nonzero sample points of the bound field."""
    rng = random.Random(seed)
    return [bindings.field.random_element(rng) for _ in range(count)]


def sample_pairs(
    bindings: Bindings, count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> list[tuple[FieldElem, FieldElem]]:
    """Sample pairs (u, v) with u, v and u+v all nonzero."""
    rng = random.Random(seed)
    out: list[tuple[FieldElem, FieldElem]] = []
    while len(out) < count:
        u = bindings.field.random_element(rng)
        v = bindings.field.random_element(rng)
        if not (u + v).is_zero:
            out.append((u, v))
    return out
