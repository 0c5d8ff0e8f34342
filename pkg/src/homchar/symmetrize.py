"""Symmetrized multiadditive form of an equation, evaluated at substitution patterns.

For a profile with common degree N, each row f^q(x^p) lifts to the symmetric
N-additive form obtained by averaging over all N! arrangements of N formal
slots into q consecutive blocks of size p.  Evaluating that form with some
slots set to 1 and the rest to marked tokens (x, y, z) produces exact linear
identities between products f_i(monomial) * f_i(1)^e.

The fast path computes the resulting coefficients by multiset combinatorics
(block-occupancy counts); an explicit permutation enumeration with a hard
size cap serves as the independent oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .equation import ExponentProfile
from .errors import (
    CannotEliminateError,
    CapExceededError,
    UnsupportedPatternError,
)
from .expr import MultiIndex
from .scalars import GAUSS_ZERO, GaussRational

MARKED_TOKENS = ("x", "y", "z")
BRUTE_FORCE_MAX_N = 8
POLARIZATION_MAX_ORDER = 4


@dataclass(frozen=True)
class BlockPattern:
    """A multiset over the tokens x, y, z, 1 filling the N argument slots."""

    counts: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        for token, count in self.counts:
            if token not in MARKED_TOKENS and token != "1":
                raise UnsupportedPatternError(f"unsupported token {token!r}")
            if token in seen:
                raise UnsupportedPatternError(f"token {token!r} listed twice")
            if count < 0:
                raise UnsupportedPatternError("negative multiplicity")
            seen.add(token)
        if len([t for t, c in self.counts if t != "1" and c > 0]) > len(MARKED_TOKENS):
            raise UnsupportedPatternError("more than three marked tokens")

    @classmethod
    def of(cls, mapping: Mapping[str, int] | None = None, **counts: int) -> "BlockPattern":
        merged = dict(mapping or {})
        merged.update(counts)
        ordered = [(t, merged[t]) for t in (*MARKED_TOKENS, "1") if merged.get(t)]
        return cls(tuple(ordered))

    @classmethod
    def diagonal(cls, n: int) -> "BlockPattern":
        return cls.of(x=n)

    @classmethod
    def parse(cls, text: str) -> "BlockPattern":
        """Parse the literal form ``{x:1, y:1, 1:2}``."""
        body = text.strip()
        if body.startswith("{") and body.endswith("}"):
            body = body[1:-1]
        counts: dict[str, int] = {}
        for piece in body.split(","):
            piece = piece.strip()
            if not piece:
                continue
            if ":" not in piece:
                raise UnsupportedPatternError(f"bad pattern entry {piece!r}")
            token, _, mult = piece.partition(":")
            try:
                counts[token.strip()] = int(mult)
            except ValueError:
                raise UnsupportedPatternError(f"bad multiplicity in {piece!r}") from None
        if not counts:
            raise UnsupportedPatternError("empty pattern")
        return cls.of(counts)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    @property
    def marked(self) -> tuple[tuple[str, int], ...]:
        return tuple((t, c) for t, c in self.counts if t != "1")

    @property
    def unit_count(self) -> int:
        return next((c for t, c in self.counts if t == "1"), 0)

    def render(self) -> str:
        return "{" + ", ".join(f"{t}:{c}" for t, c in self.counts) + "}"


# A row term key: the sorted tuple of inner-argument monomials, one per factor.
# Monomials are exponent tuples over the identity's token order; the all-zero
# monomial is the argument 1.
FactorKey = tuple[MultiIndex, ...]


@dataclass
class AbstractIdentity:
    """A formal identity  sum of coeff * f_i(m_1) ... f_i(m_q)  = 0."""

    token_order: tuple[str, ...]
    names: tuple[str, ...]
    terms: dict[tuple[int, FactorKey], GaussRational] = field(default_factory=dict)
    assumptions: tuple[str, ...] = ()

    def cleaned(self) -> "AbstractIdentity":
        return AbstractIdentity(
            self.token_order,
            self.names,
            {k: v for k, v in self.terms.items() if not v.is_zero},
            self.assumptions,
        )

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.terms.values())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AbstractIdentity)
            and self.token_order == other.token_order
            and self.cleaned().terms == other.cleaned().terms
        )

    def add_term(self, row: int, factors: FactorKey, coeff: GaussRational) -> None:
        key = (row, tuple(sorted(factors)))
        self.terms[key] = self.terms.get(key, GAUSS_ZERO) + coeff

    def scaled(self, factor) -> "AbstractIdentity":
        factor = GaussRational.of(factor)
        return AbstractIdentity(
            self.token_order,
            self.names,
            {k: v * factor for k, v in self.terms.items()},
            self.assumptions,
        )

    def minus(self, other: "AbstractIdentity") -> "AbstractIdentity":
        if self.token_order != other.token_order:
            raise UnsupportedPatternError("identities over different token sets")
        merged = dict(self.terms)
        for key, value in other.terms.items():
            merged[key] = merged.get(key, GAUSS_ZERO) - value
        return AbstractIdentity(self.token_order, self.names, merged, self.assumptions).cleaned()

    def instantiate(
        self, monomial: MultiIndex, token_order: tuple[str, ...]
    ) -> "AbstractIdentity":
        """Substitute the single token of a one-variable identity by ``monomial``."""
        if len(self.token_order) != 1:
            raise CannotEliminateError("instantiation needs a one-variable identity")
        out: dict[tuple[int, FactorKey], GaussRational] = {}
        width = len(token_order)
        for (row, factors), coeff in self.terms.items():
            new_factors = tuple(
                sorted(tuple(f[0] * m for m in monomial) if f[0] else (0,) * width for f in factors)
            )
            key = (row, new_factors)
            out[key] = out.get(key, GAUSS_ZERO) + coeff
        return AbstractIdentity(token_order, self.names, out, self.assumptions)

    def sorted_terms(self) -> list[tuple[tuple[int, FactorKey], GaussRational]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def _monomial_text(self, mono: MultiIndex) -> str:
        if not any(mono):
            return "1"
        return "*".join(
            tok if e == 1 else f"{tok}^{e}"
            for tok, e in zip(self.token_order, mono)
            if e
        )

    def render(self) -> str:
        if not self.terms:
            return "0 = 0"
        pieces: list[str] = []
        for (row, factors), coeff in self.sorted_terms():
            if coeff.is_zero:
                continue
            name = self.names[row]
            grouped: dict[MultiIndex, int] = {}
            for mono in factors:
                grouped[mono] = grouped.get(mono, 0) + 1
            parts = []
            # units first, then x-dominant monomials before y-dominant ones
            for mono in sorted(grouped, key=lambda m: (sum(m), tuple(-e for e in m))):
                e = grouped[mono]
                factor = f"{name}({self._monomial_text(mono)})"
                parts.append(factor if e == 1 else f"{factor}^{e}")
            body = "*".join(parts)
            negative = coeff.im == 0 and coeff.re < 0 or coeff.re == 0 and coeff.im < 0
            shown = -coeff if negative else coeff
            shown_text = str(shown)
            if shown.re != 0 and shown.im != 0:
                shown_text = f"({shown_text})"
            if shown_text != "1":
                body = f"{shown_text}*{body}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces) + " = 0"

    def __str__(self) -> str:
        return self.render()


# -- combinatorial weights ------------------------------------------------


def _falling(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n - j
    return out


def pattern_weight(p: int, N: int, grouping: Sequence[int]) -> Fraction:
    """Fraction of slot arrangements placing marked tokens per ``grouping``.

    ``grouping`` lists cluster sizes: tokens in the same cluster land in the
    same size-p block, distinct clusters land in distinct blocks.  Slots are
    partitioned into N/p consecutive blocks.
    """
    if p < 1 or N < 1 or N % p:
        raise ValueError(f"block size {p} does not divide {N}")
    sizes = list(grouping)
    if any(s < 1 for s in sizes):
        raise ValueError("cluster sizes must be positive")
    m = sum(sizes)
    if m > N:
        raise ValueError("more marked tokens than slots")
    q = N // p
    numerator = _falling(q, len(sizes))
    for size in sizes:
        numerator *= _falling(p, size)
    return Fraction(numerator, _falling(N, m))


def _weak_compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first, *rest)


def evaluate_pattern(profile: ExponentProfile, pattern: BlockPattern) -> AbstractIdentity:
    """The identity F(pattern) = 0 with coefficients computed combinatorially.

    The diagonal pattern {x: N} reproduces the original equation term for
    term; {x:1, 1:N-1} and {x:1, y:1, 1:N-2} give the linear-dependence and
    product identities used throughout the analysis.
    """
    if pattern.total != profile.N:
        raise UnsupportedPatternError(
            f"pattern fills {pattern.total} slots but the profile needs {profile.N}"
        )
    marked = pattern.marked
    token_order = tuple(t for t, _ in marked)
    identity = AbstractIdentity(token_order, profile.names)
    n_fact = math.factorial(profile.N)
    token_factorials = math.factorial(pattern.unit_count)
    for _, count in marked:
        token_factorials *= math.factorial(count)
    for i, (p, q) in enumerate(profile.rows):
        multiplier = profile.row_multiplier(i)
        per_token = [list(_weak_compositions(count, q)) for _, count in marked]
        for combo in itertools.product(*per_token):
            arrangements = 1
            factors = []
            feasible = True
            for block in range(q):
                load = sum(comp[block] for comp in combo)
                if load > p:
                    feasible = False
                    break
                ways = math.factorial(p)
                for comp in combo:
                    ways //= math.factorial(comp[block])
                ways //= math.factorial(p - load)
                arrangements *= ways
                factors.append(tuple(comp[block] for comp in combo))
            if not feasible:
                continue
            weight = Fraction(token_factorials * arrangements, n_fact)
            identity.add_term(i, tuple(factors), multiplier * weight)
    return identity.cleaned()


def brute_force_pattern(profile: ExponentProfile, pattern: BlockPattern) -> AbstractIdentity:
    """Same contract as evaluate_pattern, by explicit enumeration over all N! arrangements."""
    if profile.N > BRUTE_FORCE_MAX_N:
        raise CapExceededError(
            f"brute force enumerates N! arrangements; N = {profile.N} exceeds the cap {BRUTE_FORCE_MAX_N}"
        )
    if pattern.total != profile.N:
        raise UnsupportedPatternError(
            f"pattern fills {pattern.total} slots but the profile needs {profile.N}"
        )
    marked = pattern.marked
    token_order = tuple(t for t, _ in marked)
    token_pos = {t: k for k, (t, _) in enumerate(marked)}
    slots: list[str] = []
    for token, count in pattern.counts:
        slots.extend([token] * count)
    identity = AbstractIdentity(token_order, profile.names)
    unit = Fraction(1, math.factorial(profile.N))
    width = len(token_order)
    for i, (p, q) in enumerate(profile.rows):
        multiplier = profile.row_multiplier(i)
        counter: dict[FactorKey, int] = {}
        for arrangement in itertools.permutations(slots):
            factors = []
            for block in range(q):
                mono = [0] * width
                for slot in arrangement[block * p : (block + 1) * p]:
                    if slot != "1":
                        mono[token_pos[slot]] += 1
                factors.append(tuple(mono))
            key = tuple(sorted(factors))
            counter[key] = counter.get(key, 0) + 1
        for key, count in counter.items():
            identity.add_term(i, key, multiplier * (unit * count))
    return identity.cleaned()


# -- elimination ----------------------------------------------------------


def _single_factor_monomial(factors: FactorKey) -> MultiIndex | None:
    """The unique non-unit inner monomial of a factor list, if there is exactly one."""
    nonunit = [m for m in factors if any(m)]
    return nonunit[0] if len(nonunit) == 1 else None


def eliminate_dependence(
    idA: AbstractIdentity, idB: AbstractIdentity, target_row: int
) -> AbstractIdentity:
    """Cancel the target row's single-argument terms in idB using idA.

    idA must be a one-variable identity containing the term
    f_target(x) * f_target(1)^(q-1) with nonzero coefficient; it is
    instantiated at each monomial m where idB has the matching term
    f_target(m) * f_target(1)^(q-1) and subtracted with the right weight.
    The result is scaled by a positive rational to clear denominators.
    No nonvanishing of any f_i(1) is assumed by this substitution.
    """
    if len(idA.token_order) != 1:
        raise CannotEliminateError("source identity must use a single marked token")
    alpha = GAUSS_ZERO
    for (row, factors), coeff in idA.terms.items():
        if row != target_row:
            continue
        mono = _single_factor_monomial(factors)
        if mono == (1,):
            alpha = alpha + coeff
    if alpha.is_zero:
        raise CannotEliminateError(
            f"target row {target_row} has no linear term in the source identity"
        )
    result = AbstractIdentity(idB.token_order, idB.names, dict(idB.terms))
    for (row, factors), beta in list(idB.terms.items()):
        if row != target_row or beta.is_zero:
            continue
        mono = _single_factor_monomial(factors)
        if mono is None:
            continue
        substitution = idA.instantiate(mono, idB.token_order).scaled(beta / alpha)
        result = result.minus(substitution)
    return _clear_denominators(result)


def _clear_denominators(identity: AbstractIdentity) -> AbstractIdentity:
    denominators = [1]
    numerators = []
    for coeff in identity.terms.values():
        for part in (coeff.re, coeff.im):
            if part != 0:
                denominators.append(part.denominator)
                numerators.append(abs(part.numerator))
    if not numerators:
        return identity.cleaned()
    lcm = math.lcm(*denominators)
    gcd = math.gcd(*numerators)
    return identity.scaled(Fraction(lcm, gcd)).cleaned()


# -- polarization ----------------------------------------------------------

# Basis element of the expansion: a sorted tuple of variable ids filling the
# n slots of the symmetric form A.  Variable 0 is x; 1..m are the increments.
_Multiset = tuple[int, ...]


def _expand_trace(variables: Sequence[int], order: int) -> dict[_Multiset, int]:
    """A(v, ..., v) for v = sum of the given variables, in the multiset basis."""
    out: dict[_Multiset, int] = {}
    for assignment in itertools.product(variables, repeat=order):
        key = tuple(sorted(assignment))
        out[key] = out.get(key, 0) + 1
    return out


@dataclass(frozen=True)
class PolarizationCheck:
    """Verified difference-operator identities for a generic symmetric n-linear form."""

    order: int
    general_identity_holds: bool  # distinct increments y_1..y_n give n! * A(y_1,...,y_n)
    equal_increment_holds: bool   # n-fold difference by one y gives n! * A(y,...,y)
    vanishing_holds: bool         # n+1 distinct increments give 0
    trace: tuple[str, ...]

    @property
    def verified(self) -> bool:
        return self.general_identity_holds and self.equal_increment_holds and self.vanishing_holds


def _difference_expansion(order: int, increments: int) -> dict[_Multiset, int]:
    """Expansion of the ``increments``-fold difference of the trace at x."""
    out: dict[_Multiset, int] = {}
    for subset_size in range(increments + 1):
        for subset in itertools.combinations(range(1, increments + 1), subset_size):
            sign = (-1) ** (increments - subset_size)
            for key, count in _expand_trace((0, *subset), order).items():
                out[key] = out.get(key, 0) + sign * count
    return {k: v for k, v in out.items() if v}


def polarization_check(n: int) -> PolarizationCheck:
    """Symbolically verify the polarization identities for a symmetric n-linear form."""
    if n < 1:
        raise ValueError("order must be at least 1")
    if n > POLARIZATION_MAX_ORDER:
        raise CapExceededError(
            f"symbolic polarization is capped at order {POLARIZATION_MAX_ORDER}"
        )
    factorial_n = math.factorial(n)
    general = _difference_expansion(n, n)
    general_target = {tuple(range(1, n + 1)): factorial_n}
    # n-fold difference with the same increment y: sum_j C(n,j)(-1)^(n-j) A*(x+j*y),
    # expanded via A*(x + j*y) = sum_k C(n,k) j^k A(x^(n-k) y^k).
    equal: dict[_Multiset, int] = {}
    for j in range(n + 1):
        sign = math.comb(n, j) * (-1) ** (n - j)
        for k in range(n + 1):
            key = tuple(sorted((0,) * (n - k) + (1,) * k))
            equal[key] = equal.get(key, 0) + sign * math.comb(n, k) * j**k
    equal = {k: v for k, v in equal.items() if v}
    equal_target = {(1,) * n: factorial_n}
    vanishing = _difference_expansion(n, n + 1)

    def _basis_text(key: _Multiset) -> str:
        labels = ["x" if v == 0 else f"y{v}" for v in key]
        return "A(" + ", ".join(labels) + ")"

    trace = [
        f"difference of order {n} at distinct increments: "
        + (" + ".join(f"{c}*{_basis_text(k)}" for k, c in sorted(general.items())) or "0"),
        f"difference of order {n} at one increment: "
        + (" + ".join(f"{c}*{_basis_text(k)}" for k, c in sorted(equal.items())) or "0"),
        f"difference of order {n + 1} at distinct increments: "
        + (" + ".join(f"{c}*{_basis_text(k)}" for k, c in sorted(vanishing.items())) or "0"),
    ]
    return PolarizationCheck(
        order=n,
        general_identity_holds=general == general_target,
        equal_increment_holds=equal == equal_target,
        vanishing_holds=not vanishing,
        trace=tuple(trace),
    )


def diagonal_identity(profile: ExponentProfile) -> AbstractIdentity:
    """The original equation written as an AbstractIdentity over the token x."""
    identity = AbstractIdentity(("x",), profile.names)
    for i, (p, q) in enumerate(profile.rows):
        identity.add_term(i, ((p,),) * q, profile.row_multiplier(i))
    return identity.cleaned()
