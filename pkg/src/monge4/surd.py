"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

Normalizing a 2-jet to its canonical form sometimes needs one square root
(e.g. the directions of a hyperbolic pencil are roots of a binary
quadratic).  A :class:`QuadSurd` ``a + b*sqrt(d)`` keeps those computations
exact, so equalities such as ``a03 == 0`` remain decidable downstream.

Values with ``b == 0`` collapse to :class:`fractions.Fraction`, so code that
never needs a root never sees a surd.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def _square_part(n: int) -> tuple[int, int]:
    """Split ``n > 0`` as ``s*s*r`` removing small square factors; returns (s, r)."""
    s, r = 1, n
    p = 2
    while p * p <= r and p < 2000:
        while r % (p * p) == 0:
            r //= p * p
            s *= p
        p += 1
    root = math.isqrt(r)
    if root * root == r:
        return s * root, 1
    return s, r


def exact_sqrt(value) -> Fraction | "QuadSurd":
    """Square root of a nonnegative rational, as a Fraction or a pure surd."""
    q = _as_fraction(value)
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return Fraction(0)
    # sqrt(n/m) = sqrt(n*m)/m
    s, r = _square_part(q.numerator * q.denominator)
    coeff = Fraction(s, q.denominator)
    if r == 1:
        return coeff
    return QuadSurd(0, coeff, r)


class QuadSurd:
    """The real number ``a + b*sqrt(d)`` with rational a, b and integer d > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if d <= 1:
            raise ValueError("radicand must be an integer > 1")
        if math.isqrt(d) ** 2 == d:
            raise ValueError("radicand must not be a perfect square")
        self.a = _as_fraction(a)
        self.b = _as_fraction(b)
        self.d = int(d)

    @staticmethod
    def make(a, b, d: int):
        if b == 0:
            return _as_fraction(a)
        return QuadSurd(a, b, d)

    def _coerce(self, other):
        """Return (a, b) of ``other`` expressed over this surd's radicand."""
        if isinstance(other, QuadSurd):
            if other.d == self.d:
                return other.a, other.b
            # compatible when d1*d2 is a perfect square
            prod = self.d * other.d
            root = math.isqrt(prod)
            if root * root != prod:
                raise ValueError(
                    f"incompatible radicands {self.d} and {other.d}"
                )
            # sqrt(d2) = root / sqrt(d1) = (root/d1) sqrt(d1)
            return other.a, other.b * Fraction(root, self.d)
        if isinstance(other, float):
            raise TypeError("mixing QuadSurd with float; convert explicitly")
        return _as_fraction(other), Fraction(0)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadSurd.make(self.a + a, self.b + b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadSurd.make(self.a - a, self.b - b, self.d)

    def __rsub__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadSurd.make(a - self.a, b - self.b, self.d)

    def __mul__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadSurd.make(
            self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d
        )

    __rmul__ = __mul__

    def _inverse(self):
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("QuadSurd division by zero")
        return QuadSurd.make(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadSurd):
            return self * other._inverse()
        try:
            a, _ = self._coerce(other)
        except TypeError:
            return NotImplemented
        if a == 0:
            raise ZeroDivisionError("QuadSurd division by zero")
        return QuadSurd.make(self.a / a, self.b / a, self.d)

    def __rtruediv__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadSurd.make(a, b, self.d) * self._inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (1 / self) ** (-n)
        result = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    # comparison -------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __eq__(self, other):
        try:
            a, b = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == a and self.b == b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return True  # b != 0 always, so a + b sqrt(d) is irrational, never zero

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadSurd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return f"{self.a}+{self.b}*sqrt({self.d})"


def sign(value) -> int:
    """Sign of an exact or floating value."""
    if isinstance(value, QuadSurd):
        return value.sign()
    return (value > 0) - (value < 0)
