import random

import pytest
from fractions import Fraction

from helpers import SEED, naive_mul, random_sympoly, repeated_pow, std_universe
from homchar.errors import UniverseMismatchError
from homchar.expr import (
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
from homchar.scalars import GaussRational


@pytest.fixture
def rng():
    return random.Random(SEED)


def test_additive_identity(rng):
    universe = std_universe()
    for _ in range(20):
        p = random_sympoly(rng, universe)
        assert poly_arith(p, SymPoly.zero(universe), "add") == p


def test_difference_of_squares():
    universe = std_universe(nhoms=2, nlogs=0)
    p1 = SymPoly.from_symbol(universe, hom(1))
    p2 = SymPoly.from_symbol(universe, hom(2))
    product = poly_arith(poly_arith(p1, p2, "add"), poly_arith(p1, p2, "sub"), "mul")
    expected = poly_arith(poly_pow(p1, 2), poly_pow(p2, 2), "sub")
    assert product == expected


def test_square_against_naive_oracle():
    # (2*a1 + 3)^2 = 4*a1^2 + 12*a1 + 9
    universe = std_universe(nhoms=0, nlogs=1)
    a = SymPoly.from_symbol(universe, logderiv(1))
    p = a.scale(2) + SymPoly.constant(universe, 3)
    squared = poly_arith(p, p, "mul")
    assert squared == naive_mul(p, p)
    expected = (
        poly_pow(a, 2).scale(4) + a.scale(12) + SymPoly.constant(universe, 9)
    )
    assert squared == expected
    assert squared.render() == "4*a1(x)^2 + 12*a1(x) + 9"


def test_random_products_match_naive_oracle(rng):
    universe = std_universe(unknowns=("c1", "c2"))
    for _ in range(50):
        p = random_sympoly(rng, universe)
        q = random_sympoly(rng, universe)
        assert p * q == naive_mul(p, q)


def test_pow_empty_product():
    universe = std_universe()
    p = random_sympoly(random.Random(1), universe)
    assert poly_pow(p, 0) == SymPoly.constant(universe, 1)


def test_pow_binomial():
    universe = std_universe(nhoms=2, nlogs=0)
    x1 = SymPoly.from_symbol(universe, hom(1))
    x2 = SymPoly.from_symbol(universe, hom(2))
    squared = poly_pow(x1 + x2, 2)
    expected = poly_pow(x1, 2) + (x1 * x2).scale(2) + poly_pow(x2, 2)
    assert squared == expected


def test_pow_trinomial_with_unknowns():
    # (c1*X1 + c2*X2)^3 has the multinomial coefficients 1, 3, 3, 1
    universe = SymbolUniverse.of([hom(1), hom(2)], ("c1", "c2"))
    base = SymPoly.from_unknown(universe, "c1") * SymPoly.from_symbol(universe, hom(1)) + (
        SymPoly.from_unknown(universe, "c2") * SymPoly.from_symbol(universe, hom(2))
    )
    cubed = poly_pow(base, 3)
    assert cubed == repeated_pow(base, 3)
    coeffs = {mono: c for mono, c in cubed.terms.items()}
    assert coeffs[(3, 0)] == UnknownPoly(2, {(3, 0): 1})
    assert coeffs[(2, 1)] == UnknownPoly(2, {(2, 1): 3})
    assert coeffs[(1, 2)] == UnknownPoly(2, {(1, 2): 3})
    assert coeffs[(0, 3)] == UnknownPoly(2, {(0, 3): 1})


def test_pow_matches_repeated_multiplication(rng):
    universe = std_universe()
    for _ in range(12):
        p = random_sympoly(rng, universe, max_terms=2)
        for e in range(7):
            assert poly_pow(p, e) == repeated_pow(p, e)


def test_ring_laws(rng):
    universe = std_universe(unknowns=("c1",))
    for _ in range(100):
        p = random_sympoly(rng, universe)
        q = random_sympoly(rng, universe)
        r = random_sympoly(rng, universe)
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r


def test_substitute_power_hom():
    universe = std_universe(nhoms=1, nlogs=0)
    phi = SymPoly.from_symbol(universe, hom(1))
    assert substitute_power(phi, 1, 4) == poly_pow(phi, 4)


def test_substitute_power_logderiv_polynomial():
    # 20 + 4a + a^2 at x -> x^4 becomes 20 + 16a + 16a^2
    universe = std_universe(nhoms=0, nlogs=1)
    a = SymPoly.from_symbol(universe, logderiv(1))
    p = SymPoly.constant(universe, 20) + a.scale(4) + poly_pow(a, 2)
    expected = SymPoly.constant(universe, 20) + a.scale(16) + poly_pow(a, 2).scale(16)
    assert substitute_power(p, 1, 4) == expected


def test_substitute_power_logderiv_square():
    universe = std_universe(nhoms=0, nlogs=1)
    a2 = poly_pow(SymPoly.from_symbol(universe, logderiv(1)), 2)
    assert substitute_power(a2, 1, 2) == a2.scale(4)


def test_substitute_power_composition(rng):
    universe = std_universe()
    for _ in range(60):
        p = random_sympoly(rng, universe)
        k = rng.randint(1, 4)
        m = rng.randint(1, 4)
        twice = substitute_power(substitute_power(p, 1, k), 1, m)
        assert twice == substitute_power(p, 1, k * m)


def test_eval_at_one_examples():
    universe = SymbolUniverse.of([hom(1, 1), hom(2, 2)])
    p = SymPoly.from_symbol(universe, hom(1, 1)) * SymPoly.from_symbol(universe, hom(2, 2))
    assert eval_at_one(p, 1) == SymPoly.from_symbol(universe, hom(2, 2))

    universe2 = std_universe(nhoms=0, nlogs=1)
    a = SymPoly.from_symbol(universe2, logderiv(1))
    p2 = SymPoly.constant(universe2, 20) + a.scale(4) + poly_pow(a, 2)
    assert eval_at_one(p2, 1) == SymPoly.constant(universe2, 20)

    assert eval_at_one(SymPoly.zero(universe2), 1) == SymPoly.zero(universe2)


def test_eval_at_one_after_substitution(rng):
    universe = std_universe()
    for _ in range(60):
        p = random_sympoly(rng, universe)
        k = rng.randint(1, 5)
        assert eval_at_one(substitute_power(p, 1, k), 1) == eval_at_one(p, 1)


def test_collect_empty():
    universe = std_universe()
    assert collect_coefficients(SymPoly.zero(universe)) == []


def test_collect_merges_like_terms():
    universe = SymbolUniverse.of([hom(1)], ("c1", "c2"))
    x_sq = poly_pow(SymPoly.from_symbol(universe, hom(1)), 2)
    p = SymPoly.from_unknown(universe, "c1") * x_sq + SymPoly.from_unknown(universe, "c2") * x_sq
    entries = collect_coefficients(p)
    assert len(entries) == 1
    mono, coeff = entries[0]
    assert mono == (2,)
    assert coeff == UnknownPoly(2, {(1, 0): 1, (0, 1): 1})


def test_collect_is_a_bijection(rng):
    universe = std_universe(unknowns=("c1",))
    for _ in range(40):
        p = random_sympoly(rng, universe)
        rebuilt = SymPoly.zero(universe)
        for mono, coeff in collect_coefficients(p):
            rebuilt = rebuilt + SymPoly(universe, {mono: coeff})
        assert rebuilt == p


def test_universe_mismatch_raises():
    u1 = std_universe(nhoms=1, nlogs=0)
    u2 = std_universe(nhoms=2, nlogs=0)
    p = SymPoly.constant(u1, 1)
    q = SymPoly.constant(u2, 1)
    with pytest.raises(UniverseMismatchError):
        poly_arith(p, q, "add")


def test_gauss_rational_arithmetic():
    i = GaussRational(Fraction(0), Fraction(1))
    assert i * i == GaussRational(Fraction(-1))
    assert (GaussRational(Fraction(1), Fraction(2)) * GaussRational(Fraction(1), Fraction(-2))) == GaussRational(Fraction(5))
    assert str(GaussRational(Fraction(3, 2), Fraction(-1))) == "3/2-i"
    assert (GaussRational(Fraction(1), Fraction(1)) / GaussRational(Fraction(1), Fraction(1))) == GaussRational(Fraction(1))


def test_canonical_rendering_is_sorted():
    universe = std_universe(nhoms=1, nlogs=1)
    phi = SymPoly.from_symbol(universe, hom(1))
    a = SymPoly.from_symbol(universe, logderiv(1))
    p = phi + poly_pow(a, 2) * phi.scale(-1)
    assert p.render() == "-phi1(x)*a1(x)^2 + phi1(x)"
