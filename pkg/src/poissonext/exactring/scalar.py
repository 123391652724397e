"""Exact Gaussian rationals.

Real values are kept as plain ``int``/``Fraction`` so that the common case
(every coefficient in the Z_3 pipeline is rational) stays on the fast path.
Only values with a nonzero imaginary part become :class:`GaussianRational`.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class GaussianRational:
    """a + b*i with a, b rational; immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @property
    def re_num(self) -> int:
        return self.re.numerator

    @property
    def re_den(self) -> int:
        return self.re.denominator

    @property
    def im_num(self) -> int:
        return self.im.numerator

    @property
    def im_den(self) -> int:
        return self.im.denominator

    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Fraction, Rational)):
            return x, 0
        return NotImplemented

    def __add__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return NotImplemented
        return scalar_from_parts(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return NotImplemented
        return scalar_from_parts(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return NotImplemented
        return scalar_from_parts(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return NotImplemented
        a, b = self.re, self.im
        c, d = p
        return scalar_from_parts(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return scalar_from_parts(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return NotImplemented
        return self * inverse(scalar_from_parts(*p))

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return NotImplemented
        return scalar_from_parts(*p) * inverse(self)

    def __eq__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


def scalar_from_parts(re, im):
    if im == 0:
        return _demote(re)
    return GaussianRational(re, im)


def _demote(q):
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


def scalar(x):
    """Normalise ``x`` to the canonical coefficient representation."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _demote(x)
    if isinstance(x, GaussianRational):
        return scalar_from_parts(x.re, x.im)
    if isinstance(x, complex):
        raise TypeError("floating-point complex values are not exact")
    if isinstance(x, float):
        raise TypeError("floating-point values are not exact")
    if isinstance(x, str):
        from .parse import parse_scalar

        return parse_scalar(x)
    return _demote(Fraction(x))


def inverse(x):
    x = scalar(x)
    if not x:
        raise ZeroDivisionError("inverse of zero scalar")
    if isinstance(x, GaussianRational):
        n = x.norm()
        return scalar_from_parts(x.re / n, -x.im / n)
    return _demote(Fraction(1) / x)


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational)) and not isinstance(x, bool)


def _format_rat(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Text form compatible with the coefficient grammar."""
    x = scalar(x)
    if isinstance(x, GaussianRational):
        if x.re == 0:
            return f"{_format_rat(x.im)}i"
        sign = "-" if x.im < 0 else "+"
        return f"({_format_rat(x.re)}{sign}{_format_rat(abs(x.im))}i)"
    return _format_rat(x)


I = GaussianRational(0, 1)
