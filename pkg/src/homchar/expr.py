"""Sparse exact multivariate polynomial kernel.

Two nested polynomial rings drive everything else in the package:

* ``UnknownPoly`` -- polynomials in unknown constants (``c1_1``, ...) with
  Gaussian-rational coefficients.  These appear as the coefficients of the
  outer ring.
* ``SymPoly`` -- polynomials in formal symbols ``phi_j(v)`` (multiplicative:
  ``phi(v^k) = phi(v)^k``) and ``a_r(v)`` (logarithmic-derivative style:
  ``a(v^k) = k*a(v)``), with ``UnknownPoly`` coefficients.

Monomials are exponent tuples keyed against a declared ``SymbolUniverse``;
combining polynomials from different universes raises.  All values are
immutable after construction and every operation is pure, so results are
safe to share.  Term iteration order is graded lexicographic (descending),
which fixes the canonical text rendering used by reports and golden tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import UniverseMismatchError
from .scalars import GAUSS_ONE, GAUSS_ZERO, Coercible, GaussRational

# A multi-index: one non-negative exponent per variable, fixed length.
MultiIndex = tuple[int, ...]


def grlex_key(mono: MultiIndex) -> tuple[int, MultiIndex]:
    """Sort key for graded lexicographic order (use with reverse=True)."""
    return (sum(mono), mono)


class Kind(enum.IntEnum):
    """Rewrite behaviour of a symbol under base-power substitution."""

    HOM = 0       # phi(v^k) = phi(v)^k, phi(1) = 1
    LOGDERIV = 1  # a(v^k) = k*a(v),     a(1) = 0


_BASE_VAR_NAMES = ("x", "y", "z")


def base_var_name(base_var: int) -> str:
    if 1 <= base_var <= len(_BASE_VAR_NAMES):
        return _BASE_VAR_NAMES[base_var - 1]
    return f"v{base_var}"


@dataclass(frozen=True, order=True)
class SymbolId:
    """A formal symbol, keyed (and ordered) by (kind, index, base variable)."""

    kind: Kind
    index: int
    base_var: int = 1

    def __post_init__(self) -> None:
        if self.index < 1 or self.base_var < 1:
            raise ValueError("symbol index and base variable are 1-based")

    @property
    def name(self) -> str:
        stem = "phi" if self.kind == Kind.HOM else "a"
        return f"{stem}{self.index}({base_var_name(self.base_var)})"


def hom(index: int, base_var: int = 1) -> SymbolId:
    return SymbolId(Kind.HOM, index, base_var)


def logderiv(index: int, base_var: int = 1) -> SymbolId:
    return SymbolId(Kind.LOGDERIV, index, base_var)


@dataclass(frozen=True)
class SymbolUniverse:
    """The declared symbol and unknown-constant alphabet of a computation."""

    symbols: tuple[SymbolId, ...]
    unknowns: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if list(self.symbols) != sorted(set(self.symbols)):
            raise ValueError("universe symbols must be sorted and unique")
        if len(set(self.unknowns)) != len(self.unknowns):
            raise ValueError("unknown names must be unique")

    @classmethod
    def of(cls, symbols: Iterable[SymbolId], unknowns: Iterable[str] = ()) -> "SymbolUniverse":
        return cls(tuple(sorted(set(symbols))), tuple(unknowns))

    @property
    def nsyms(self) -> int:
        return len(self.symbols)

    @property
    def nunknowns(self) -> int:
        return len(self.unknowns)

    def position(self, sym: SymbolId) -> int:
        try:
            return self.symbols.index(sym)
        except ValueError:
            raise UniverseMismatchError(f"symbol {sym.name} not in universe") from None

    def unknown_position(self, name: str) -> int:
        try:
            return self.unknowns.index(name)
        except ValueError:
            raise UniverseMismatchError(f"unknown {name!r} not in universe") from None


class UnknownPoly:
    """Exact polynomial in the unknown constants of a universe.

    Stored sparsely as {multi-index: GaussRational}; zero coefficients are
    never kept, so the zero polynomial has an empty term map.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, Coercible] | None = None):
        self.nvars = nvars
        cleaned: dict[MultiIndex, GaussRational] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad multi-index {mono} for {nvars} unknowns")
            value = GaussRational.of(coeff)
            if not value.is_zero:
                cleaned[tuple(mono)] = value
        self.terms = cleaned

    @classmethod
    def const(cls, nvars: int, value: Coercible) -> "UnknownPoly":
        return cls(nvars, {(0,) * nvars: GaussRational.of(value)})

    @classmethod
    def variable(cls, nvars: int, position: int) -> "UnknownPoly":
        mono = [0] * nvars
        mono[position] = 1
        return cls(nvars, {tuple(mono): GAUSS_ONE})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(mono) == 0 for mono in self.terms)

    def constant_value(self) -> GaussRational:
        if self.is_zero:
            return GAUSS_ZERO
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    @property
    def degree(self) -> int:
        return max((sum(mono) for mono in self.terms), default=0)

    def _check(self, other: "UnknownPoly") -> None:
        if self.nvars != other.nvars:
            raise UniverseMismatchError("unknown polynomials over different alphabets")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, UnknownPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):  # pragma: no cover - dict values only
        return NotImplemented

    def __add__(self, other: "UnknownPoly") -> "UnknownPoly":
        self._check(other)
        merged = dict(self.terms)
        for mono, coeff in other.terms.items():
            merged[mono] = merged.get(mono, GAUSS_ZERO) + coeff
        return UnknownPoly(self.nvars, merged)

    def __neg__(self) -> "UnknownPoly":
        return UnknownPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "UnknownPoly") -> "UnknownPoly":
        return self + (-other)

    def __mul__(self, other: "UnknownPoly") -> "UnknownPoly":
        self._check(other)
        out: dict[MultiIndex, GaussRational] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = tuple(a + b for a, b in zip(ma, mb))
                out[mono] = out.get(mono, GAUSS_ZERO) + ca * cb
        return UnknownPoly(self.nvars, out)

    def __pow__(self, exponent: int) -> "UnknownPoly":
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = UnknownPoly.const(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, scalar: Coercible) -> "UnknownPoly":
        factor = GaussRational.of(scalar)
        return UnknownPoly(self.nvars, {m: c * factor for m, c in self.terms.items()})

    def partial(self, position: int) -> "UnknownPoly":
        """Formal partial derivative with respect to one unknown."""
        out: dict[MultiIndex, GaussRational] = {}
        for mono, coeff in self.terms.items():
            e = mono[position]
            if e == 0:
                continue
            lowered = list(mono)
            lowered[position] = e - 1
            out[tuple(lowered)] = coeff * Fraction(e)
        return UnknownPoly(self.nvars, out)

    def evaluate(self, values: Sequence[Coercible]) -> GaussRational:
        """Exact evaluation at Gaussian-rational values, one per unknown."""
        vals = [GaussRational.of(v) for v in values]
        total = GAUSS_ZERO
        for mono, coeff in self.terms.items():
            term = coeff
            for exp, v in zip(mono, vals):
                if exp:
                    term = term * v**exp
            total = total + term
        return total

    def evaluate_complex(self, values: Sequence[complex]) -> complex:
        total = 0j
        for mono, coeff in self.terms.items():
            term = complex(coeff)
            for exp, v in zip(mono, values):
                if exp:
                    term *= v**exp
            total += term
        return total

    def sorted_terms(self) -> list[tuple[MultiIndex, GaussRational]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def render(self, names: Sequence[str]) -> str:
        if self.is_zero:
            return "0"
        pieces: list[str] = []
        for mono, coeff in self.sorted_terms():
            factors = [
                names[i] if e == 1 else f"{names[i]}^{e}"
                for i, e in enumerate(mono)
                if e
            ]
            negative = coeff.im == 0 and coeff.re < 0 or coeff.re == 0 and coeff.im < 0
            shown = -coeff if negative else coeff
            body = _coeff_times(shown, "*".join(factors))
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"UnknownPoly({self.nvars}, {self.terms!r})"


def _coeff_times(coeff: GaussRational, factors: str) -> str:
    """Render ``coeff * factors`` with 1 suppressed and mixed complex bracketed."""
    text = str(coeff)
    if coeff.re != 0 and coeff.im != 0:
        text = f"({text})"
    if not factors:
        return text
    if text == "1":
        return factors
    return f"{text}*{factors}"


class SymPoly:
    """Exact polynomial in the formal symbols of a universe.

    Terms map symbol-exponent multi-indices to ``UnknownPoly`` coefficients;
    zero coefficients are dropped on construction.
    """

    __slots__ = ("universe", "terms")

    def __init__(
        self,
        universe: SymbolUniverse,
        terms: Mapping[MultiIndex, UnknownPoly] | None = None,
    ):
        self.universe = universe
        cleaned: dict[MultiIndex, UnknownPoly] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != universe.nsyms or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for universe of {universe.nsyms} symbols")
            if coeff.nvars != universe.nunknowns:
                raise UniverseMismatchError("coefficient over a different unknown alphabet")
            if not coeff.is_zero:
                cleaned[tuple(mono)] = coeff
        self.terms = cleaned

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, universe: SymbolUniverse) -> "SymPoly":
        return cls(universe, {})

    @classmethod
    def constant(cls, universe: SymbolUniverse, value: Coercible) -> "SymPoly":
        coeff = UnknownPoly.const(universe.nunknowns, value)
        return cls(universe, {(0,) * universe.nsyms: coeff})

    @classmethod
    def from_symbol(cls, universe: SymbolUniverse, sym: SymbolId, exponent: int = 1) -> "SymPoly":
        mono = [0] * universe.nsyms
        mono[universe.position(sym)] = exponent
        return cls(universe, {tuple(mono): UnknownPoly.const(universe.nunknowns, 1)})

    @classmethod
    def from_unknown(cls, universe: SymbolUniverse, name: str) -> "SymPoly":
        coeff = UnknownPoly.variable(universe.nunknowns, universe.unknown_position(name))
        return cls(universe, {(0,) * universe.nsyms: coeff})

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "SymPoly") -> None:
        if self.universe != other.universe:
            raise UniverseMismatchError("polynomials come from different symbol universes")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SymPoly)
            and self.universe == other.universe
            and self.terms == other.terms
        )

    def __hash__(self):  # pragma: no cover
        return NotImplemented

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "SymPoly") -> "SymPoly":
        self._check(other)
        merged = dict(self.terms)
        zero = UnknownPoly(self.universe.nunknowns)
        for mono, coeff in other.terms.items():
            merged[mono] = merged.get(mono, zero) + coeff
        return SymPoly(self.universe, merged)

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.universe, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        self._check(other)
        out: dict[MultiIndex, UnknownPoly] = {}
        zero = UnknownPoly(self.universe.nunknowns)
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = tuple(a + b for a, b in zip(ma, mb))
                out[mono] = out.get(mono, zero) + ca * cb
        return SymPoly(self.universe, out)

    def __pow__(self, exponent: int) -> "SymPoly":
        return poly_pow(self, exponent)

    def scale(self, scalar: Coercible) -> "SymPoly":
        return SymPoly(self.universe, {m: c.scale(scalar) for m, c in self.terms.items()})

    def scale_poly(self, factor: UnknownPoly) -> "SymPoly":
        return SymPoly(self.universe, {m: c * factor for m, c in self.terms.items()})

    # -- inspection and rendering ---------------------------------------

    def sorted_terms(self) -> list[tuple[MultiIndex, UnknownPoly]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def symbols_used(self) -> Iterator[SymbolId]:
        seen: set[SymbolId] = set()
        for mono in self.terms:
            for pos, e in enumerate(mono):
                if e:
                    seen.add(self.universe.symbols[pos])
        return iter(sorted(seen))

    def monomial_text(self, mono: MultiIndex, names: Mapping[SymbolId, str] | None = None) -> str:
        factors = []
        for pos, e in enumerate(mono):
            if not e:
                continue
            sym = self.universe.symbols[pos]
            label = names[sym] if names else sym.name
            factors.append(label if e == 1 else f"{label}^{e}")
        return "*".join(factors)

    def render(self, names: Mapping[SymbolId, str] | None = None) -> str:
        if self.is_zero:
            return "0"
        pieces: list[str] = []
        for mono, coeff in self.sorted_terms():
            factors = self.monomial_text(mono, names)
            if coeff.is_constant:
                value = coeff.constant_value()
                negative = value.im == 0 and value.re < 0 or value.re == 0 and value.im < 0
                shown = -value if negative else value
                body = _coeff_times(shown, factors)
            else:
                negative = False
                inner = coeff.render(self.universe.unknowns)
                body = f"({inner})*{factors}" if factors else f"({inner})"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SymPoly({self.render()!r})"


# -- the operation surface ---------------------------------------------


def poly_arith(p: SymPoly, q: SymPoly, op: str) -> SymPoly:
    """Exact ring arithmetic; ``op`` is one of ``add``, ``sub``, ``mul``."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def poly_pow(p: SymPoly, exponent: int) -> SymPoly:
    """Exact non-negative power; p**0 is the constant 1."""
    if exponent < 0:
        raise ValueError("negative power of a polynomial")
    result = SymPoly.constant(p.universe, 1)
    base = p
    e = exponent
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def substitute_power(p: SymPoly, base_var: int, k: int) -> SymPoly:
    """Rewrite every symbol on ``base_var`` under v -> v^k.

    Multiplicative symbols get their exponents multiplied by k; each
    logarithmic-derivative occurrence picks up a factor k (so a^m
    contributes k^m).  Symbols on other base variables are untouched.
    """
    if k < 1:
        raise ValueError("power substitution needs k >= 1")
    out: dict[MultiIndex, UnknownPoly] = {}
    zero = UnknownPoly(p.universe.nunknowns)
    for mono, coeff in p.terms.items():
        new_mono = list(mono)
        log_exp = 0
        for pos, e in enumerate(mono):
            if not e:
                continue
            sym = p.universe.symbols[pos]
            if sym.base_var != base_var:
                continue
            if sym.kind == Kind.HOM:
                new_mono[pos] = e * k
            else:
                log_exp += e
        scaled = coeff.scale(Fraction(k) ** log_exp) if log_exp else coeff
        key = tuple(new_mono)
        out[key] = out.get(key, zero) + scaled
    return SymPoly(p.universe, out)


def eval_at_one(p: SymPoly, base_var: int) -> SymPoly:
    """Evaluate the base variable at 1: phi(1) = 1, a(1) = 0."""
    out: dict[MultiIndex, UnknownPoly] = {}
    zero = UnknownPoly(p.universe.nunknowns)
    for mono, coeff in p.terms.items():
        new_mono = list(mono)
        killed = False
        for pos, e in enumerate(mono):
            if not e:
                continue
            sym = p.universe.symbols[pos]
            if sym.base_var != base_var:
                continue
            if sym.kind == Kind.HOM:
                new_mono[pos] = 0
            else:
                killed = True
                break
        if killed:
            continue
        key = tuple(new_mono)
        out[key] = out.get(key, zero) + coeff
    return SymPoly(p.universe, out)


def collect_coefficients(p: SymPoly) -> list[tuple[MultiIndex, UnknownPoly]]:
    """One (monomial, coefficient) entry per stored term, canonically ordered."""
    return p.sorted_terms()


def substitute_symbols(
    p: SymPoly,
    mapping: Mapping[SymbolId, SymPoly],
    universe: SymbolUniverse,
) -> SymPoly:
    """Replace symbols by polynomials and expand, landing in ``universe``.

    Symbols absent from the mapping must exist in the target universe and
    are carried over unchanged.  Unknown constants are matched by name.
    """
    result = SymPoly.zero(universe)
    for mono, coeff in p.terms.items():
        term = SymPoly.constant(universe, 1).scale_poly(
            _lift_unknown(coeff, p.universe.unknowns, universe.unknowns)
        )
        for pos, e in enumerate(mono):
            if not e:
                continue
            sym = p.universe.symbols[pos]
            replacement = mapping.get(sym)
            if replacement is None:
                replacement = SymPoly.from_symbol(universe, sym)
            elif replacement.universe != universe:
                raise UniverseMismatchError("replacement outside the target universe")
            term = term * poly_pow(replacement, e)
        result = result + term
    return result


def transport(p: SymPoly, universe: SymbolUniverse) -> SymPoly:
    """Re-express ``p`` in a universe containing all its symbols and unknowns."""
    out: dict[MultiIndex, UnknownPoly] = {}
    for mono, coeff in p.terms.items():
        new_mono = [0] * universe.nsyms
        for pos, e in enumerate(mono):
            if e:
                new_mono[universe.position(p.universe.symbols[pos])] = e
        out[tuple(new_mono)] = _lift_unknown(coeff, p.universe.unknowns, universe.unknowns)
    return SymPoly(universe, out)


def _lift_unknown(
    coeff: UnknownPoly,
    from_names: tuple[str, ...],
    to_names: tuple[str, ...],
) -> UnknownPoly:
    if from_names == to_names:
        return coeff
    positions = []
    for name in from_names:
        try:
            positions.append(to_names.index(name))
        except ValueError:
            raise UniverseMismatchError(f"unknown {name!r} not in target universe") from None
    out: dict[MultiIndex, GaussRational] = {}
    for mono, value in coeff.terms.items():
        new_mono = [0] * len(to_names)
        for src, e in enumerate(mono):
            if e:
                new_mono[positions[src]] = e
        out[tuple(new_mono)] = value
    return UnknownPoly(len(to_names), out)
