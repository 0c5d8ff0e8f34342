"""Exact scalars: arbitrary-precision rationals and Gaussian rationals.

Every symbolic computation in this package runs over the field Q(i) of
complex numbers with rational real and imaginary parts, so identity tests
and residuals are exact.  ``Rational`` is the standard-library Fraction;
``GaussRational`` pairs two of them with the usual complex arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction

Coercible = Union[int, Fraction, "GaussRational"]


@dataclass(frozen=True)
class GaussRational:
    """A complex number ``re + im*i`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def of(value: Coercible) -> "GaussRational":
        if isinstance(value, GaussRational):
            return value
        return GaussRational(Fraction(value))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: Coercible) -> "GaussRational":
        other = GaussRational.of(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussRational":
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other: Coercible) -> "GaussRational":
        return self + (-GaussRational.of(other))

    def __rsub__(self, other: Coercible) -> "GaussRational":
        return GaussRational.of(other) + (-self)

    def __mul__(self, other: Coercible) -> "GaussRational":
        other = GaussRational.of(other)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Coercible) -> "GaussRational":
        other = GaussRational.of(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        conj = other.conjugate()
        prod = self * conj
        return GaussRational(prod.re / norm, prod.im / norm)

    def __rtruediv__(self, other: Coercible) -> "GaussRational":
        return GaussRational.of(other) / self

    def __pow__(self, exponent: int) -> "GaussRational":
        if exponent < 0:
            return GAUSS_ONE / self ** (-exponent)
        result = GAUSS_ONE
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        imag = "i" if abs(self.im) == 1 else f"{abs(self.im)}i"
        if self.re == 0:
            return imag if self.im > 0 else f"-{imag}"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{imag}"


GAUSS_ZERO = GaussRational()
GAUSS_ONE = GaussRational(Fraction(1))
GAUSS_I = GaussRational(Fraction(0), Fraction(1))
