"""Shared random generators and small independent oracles for the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from homchar.expr import (
    MultiIndex,
    SymbolUniverse,
    SymPoly,
    UnknownPoly,
    hom,
    logderiv,
)
from homchar.scalars import GaussRational

SEED = 20260810


def std_universe(nhoms: int = 2, nlogs: int = 1, unknowns: tuple[str, ...] = ()) -> SymbolUniverse:
    symbols = [hom(j) for j in range(1, nhoms + 1)]
    symbols += [logderiv(r) for r in range(1, nlogs + 1)]
    return SymbolUniverse.of(symbols, unknowns)


def random_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.randint(1, 4))


def random_unknown_poly(rng: random.Random, nvars: int, max_terms: int = 3) -> UnknownPoly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = tuple(rng.randint(0, 2) for _ in range(nvars))
        terms[mono] = GaussRational(random_fraction(rng))
    return UnknownPoly(nvars, terms)


def random_sympoly(rng: random.Random, universe: SymbolUniverse, max_terms: int = 3) -> SymPoly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = tuple(rng.randint(0, 2) for _ in range(universe.nsyms))
        coeff = random_unknown_poly(rng, universe.nunknowns, max_terms=2)
        if not coeff.is_zero:
            terms[mono] = coeff
    return SymPoly(universe, terms)


def naive_mul(p: SymPoly, q: SymPoly) -> SymPoly:
    """Term-by-term product oracle, independent of SymPoly.__mul__.

    Builds the result by accumulating single-term polynomials through
    addition only.
    """
    total = SymPoly.zero(p.universe)
    for ma, ca in p.terms.items():
        for mb, cb in q.terms.items():
            mono: MultiIndex = tuple(a + b for a, b in zip(ma, mb))
            coeff = _naive_unknown_mul(ca, cb)
            total = total + SymPoly(p.universe, {mono: coeff})
    return total


def _naive_unknown_mul(a: UnknownPoly, b: UnknownPoly) -> UnknownPoly:
    total = UnknownPoly(a.nvars)
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            total = total + UnknownPoly(a.nvars, {mono: ca * cb})
    return total


def repeated_pow(p: SymPoly, e: int) -> SymPoly:
    out = SymPoly.constant(p.universe, 1)
    for _ in range(e):
        out = out * p
    return out
