"""Real and complex interval arithmetic with 128-bit outward rounding.

Endpoints are MPFR numbers; every lower endpoint is computed with rounding
toward -inf and every upper endpoint toward +inf, so each operation returns an
enclosure of the exact result of the operation on the input sets.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpz

PREC = 128
DN = gmpy2.context(precision=PREC, round=gmpy2.RoundDown)
UP = gmpy2.context(precision=PREC, round=gmpy2.RoundUp)
_ZERO = mpfr(0)
_INF = mpfr("inf")
_PI_LO = DN.const_pi()
_PI_HI = UP.const_pi()
_TWO_PI_LO = DN.mul(_PI_LO, 2)

__all__ = ["Interval", "ComplexInterval", "PREC", "IntervalError"]


class IntervalError(ArithmeticError):
    """An operation is undefined somewhere on the input enclosure."""


def _down(x):
    if isinstance(x, Fraction):
        return DN.div(mpz(x.numerator), mpz(x.denominator))
    if isinstance(x, int):
        return DN.div(mpz(x), mpz(1))
    if isinstance(x, str):
        return _down(Fraction(x))
    return DN.div(mpfr(x), mpz(1))


def _up(x):
    if isinstance(x, Fraction):
        return UP.div(mpz(x.numerator), mpz(x.denominator))
    if isinstance(x, int):
        return UP.div(mpz(x), mpz(1))
    if isinstance(x, str):
        return _up(Fraction(x))
    return UP.div(mpfr(x), mpz(1))


class Interval:
    """Closed real interval ``[lo, hi]``."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if isinstance(lo, Interval):
            self.lo, self.hi = lo.lo, lo.hi
            return
        if hi is None:
            hi = lo
        if isinstance(lo, str) and hi is lo:
            # decimal strings are not exactly representable in general
            self.lo, self.hi = _down(lo), _up(lo)
        else:
            self.lo = lo if isinstance(lo, type(_ZERO)) else _down(lo)
            self.hi = hi if isinstance(hi, type(_ZERO)) else _up(hi)
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def _raw(cls, lo, hi) -> "Interval":
        obj = cls.__new__(cls)
        obj.lo, obj.hi = lo, hi
        return obj

    @staticmethod
    def coerce(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval(x)

    # ------------------------------------------------------------------ info
    def width(self):
        return UP.sub(self.hi, self.lo)

    def mid(self):
        return (self.lo + self.hi) / 2

    def mag(self):
        """Upper bound of ``|x|``."""
        return max(DN.abs(self.lo), DN.abs(self.hi))

    def mig(self):
        """Lower bound of ``|x|``."""
        if self.lo > 0:
            return self.lo
        if self.hi < 0:
            return DN.minus(self.hi)
        return _ZERO

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, Fraction):
            return Fraction(*self.lo.as_integer_ratio()) <= x <= Fraction(*self.hi.as_integer_ratio())
        return self.lo <= x <= self.hi

    __contains__ = contains

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def hull(self, other) -> "Interval":
        other = Interval.coerce(other)
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))

    def upper_fraction(self) -> Fraction:
        return Fraction(*self.hi.as_integer_ratio())

    def lower_fraction(self) -> Fraction:
        return Fraction(*self.lo.as_integer_ratio())

    def __float__(self):
        return float(self.mid())

    def __repr__(self):
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"

    # ------------------------------------------------------------ arithmetic
    def __add__(self, other):
        if not isinstance(other, Interval):
            if isinstance(other, ComplexInterval):
                return NotImplemented
            other = Interval(other)
        return Interval._raw(DN.add(self.lo, other.lo), UP.add(self.hi, other.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval._raw(DN.minus(self.hi), DN.minus(self.lo))

    def __sub__(self, other):
        if not isinstance(other, Interval):
            if isinstance(other, ComplexInterval):
                return NotImplemented
            other = Interval(other)
        return Interval._raw(DN.sub(self.lo, other.hi), UP.sub(self.hi, other.lo))

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Interval):
            if isinstance(other, ComplexInterval):
                return NotImplemented
            other = Interval(other)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a >= 0 and c >= 0:
            return Interval._raw(DN.mul(a, c), UP.mul(b, d))
        if b <= 0 and d <= 0:
            return Interval._raw(DN.mul(b, d), UP.mul(a, c))
        lo = min(DN.mul(a, c), DN.mul(a, d), DN.mul(b, c), DN.mul(b, d))
        hi = max(UP.mul(a, c), UP.mul(a, d), UP.mul(b, c), UP.mul(b, d))
        return Interval._raw(lo, hi)

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise IntervalError("division by an interval containing zero")
        return Interval._raw(DN.div(1, self.hi), UP.div(1, self.lo))

    def __truediv__(self, other):
        if not isinstance(other, Interval):
            if isinstance(other, ComplexInterval):
                return NotImplemented
            other = Interval(other)
        if other.contains_zero():
            raise IntervalError("division by an interval containing zero")
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo = min(DN.div(a, c), DN.div(a, d), DN.div(b, c), DN.div(b, d))
        hi = max(UP.div(a, c), UP.div(a, d), UP.div(b, c), UP.div(b, d))
        return Interval._raw(lo, hi)

    def __rtruediv__(self, other):
        return Interval.coerce(other) / self

    def sqr(self) -> "Interval":
        lo, hi = self.mig(), self.mag()
        return Interval._raw(DN.mul(lo, lo), UP.mul(hi, hi))

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("interval powers take integer exponents; use exp/log")
        if e < 0:
            return (self**-e).reciprocal()
        if e == 0:
            return Interval(1)
        # odd powers are monotone; even powers depend only on |x|
        if e % 2:
            return Interval._raw(DN.pow(self.lo, e), UP.pow(self.hi, e))
        return Interval._raw(DN.pow(self.mig(), e), UP.pow(self.mag(), e))

    def __abs__(self):
        return Interval._raw(self.mig(), self.mag())

    # comparisons are certain-only: True means it holds for every point
    def __lt__(self, other):
        return self.hi < Interval.coerce(other).lo

    def __gt__(self, other):
        return self.lo > Interval.coerce(other).hi

    def __le__(self, other):
        return self.hi <= Interval.coerce(other).lo

    def __ge__(self, other):
        return self.lo >= Interval.coerce(other).hi

    # ------------------------------------------------------------- functions
    def sqrt(self) -> "Interval":
        if self.hi < 0:
            raise IntervalError("sqrt of a negative interval")
        return Interval._raw(DN.sqrt(max(self.lo, _ZERO)), UP.sqrt(self.hi))

    def exp(self) -> "Interval":
        return Interval._raw(DN.exp(self.lo), UP.exp(self.hi))

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise IntervalError("log of an interval touching non-positive numbers")
        return Interval._raw(DN.log(self.lo), UP.log(self.hi))

    def atan(self) -> "Interval":
        return Interval._raw(DN.atan(self.lo), UP.atan(self.hi))

    def _trig(self, fn_dn, fn_up, offset: float) -> "Interval":
        # extrema sit at (offset + j)*pi with value (-1)^j
        if UP.sub(self.hi, self.lo) >= _TWO_PI_LO:
            return Interval._raw(mpfr(-1), mpfr(1))
        lo = min(fn_dn(self.lo), fn_dn(self.hi))
        hi = max(fn_up(self.lo), fn_up(self.hi))
        jlo = math.floor(float(self.lo) / math.pi - offset) - 1
        jhi = math.ceil(float(self.hi) / math.pi - offset) + 1
        for j in range(jlo, jhi + 1):
            u = mpfr(j + offset)
            a, b = DN.mul(_PI_LO, u), DN.mul(_PI_HI, u)
            plo = min(a, b)
            a, b = UP.mul(_PI_LO, u), UP.mul(_PI_HI, u)
            phi = max(a, b)
            if phi < self.lo or plo > self.hi:
                continue
            if j % 2 == 0:
                hi = mpfr(1)
            else:
                lo = mpfr(-1)
        return Interval._raw(max(lo, mpfr(-1)), min(hi, mpfr(1)))

    def sin(self) -> "Interval":
        return self._trig(DN.sin, UP.sin, 0.5)

    def cos(self) -> "Interval":
        return self._trig(DN.cos, UP.cos, 0.0)

    def cosh(self) -> "Interval":
        a = abs(self)
        e = a.exp()
        return (e + e.reciprocal()) * Interval(Fraction(1, 2))

    def sinh(self) -> "Interval":
        e = self.exp()
        return (e - e.reciprocal()) * Interval(Fraction(1, 2))


PI = Interval._raw(DN.const_pi(), UP.const_pi())


class ComplexInterval:
    """Rectangular complex enclosure ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Interval.coerce(re)
        self.im = Interval.coerce(im)

    @staticmethod
    def coerce(x) -> "ComplexInterval":
        if isinstance(x, ComplexInterval):
            return x
        if isinstance(x, complex):
            return ComplexInterval(Interval(x.real), Interval(x.imag))
        return ComplexInterval(Interval.coerce(x), Interval(0))

    def __repr__(self):
        return f"({self.re!r} + i*{self.im!r})"

    def conj(self):
        return ComplexInterval(self.re, -self.im)

    def contains(self, z) -> bool:
        if isinstance(z, ComplexInterval):
            return self.re.contains(z.re) and self.im.contains(z.im)
        z = complex(z)
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def width(self):
        return max(self.re.width(), self.im.width())

    def __add__(self, other):
        o = ComplexInterval.coerce(other)
        return ComplexInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexInterval(-self.re, -self.im)

    def __sub__(self, other):
        o = ComplexInterval.coerce(other)
        return ComplexInterval(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ComplexInterval.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (Interval, int, Fraction)):
            other = Interval.coerce(other)
            return ComplexInterval(self.re * other, self.im * other)
        o = ComplexInterval.coerce(other)
        return ComplexInterval(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self) -> Interval:
        return self.re.sqr() + self.im.sqr()

    def __abs__(self) -> Interval:
        return self.abs2().sqrt()

    def reciprocal(self) -> "ComplexInterval":
        d = self.abs2()
        if d.lo <= 0:
            raise IntervalError("complex division by an enclosure of zero")
        return ComplexInterval(self.re / d, -self.im / d)

    def __truediv__(self, other):
        if isinstance(other, (Interval, int, Fraction)):
            other = Interval.coerce(other)
            return ComplexInterval(self.re / other, self.im / other)
        return self * ComplexInterval.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return ComplexInterval.coerce(other) * self.reciprocal()

    def exp(self) -> "ComplexInterval":
        r = self.re.exp()
        return ComplexInterval(r * self.im.cos(), r * self.im.sin())

    def log(self) -> "ComplexInterval":
        """Principal logarithm; the enclosure must lie in the right half-plane."""
        if self.re.lo <= 0:
            raise IntervalError("complex log enclosure must have positive real part")
        mod = self.abs2().log() * Interval(Fraction(1, 2))
        q = self.im / self.re
        return ComplexInterval(mod, q.atan())

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise TypeError("complex interval powers take non-negative integers")
        result = ComplexInterval(1)
        for _ in range(e):
            result = result * self
        return result

    def sin(self) -> "ComplexInterval":
        # sin(x+iy) = sin x cosh y + i cos x sinh y
        return ComplexInterval(self.re.sin() * self.im.cosh(), self.re.cos() * self.im.sinh())

    def cos(self) -> "ComplexInterval":
        # cos(x+iy) = cos x cosh y - i sin x sinh y
        return ComplexInterval(self.re.cos() * self.im.cosh(), -(self.re.sin() * self.im.sinh()))


LOG2PI = (PI * 2).log()


@lru_cache(maxsize=4096)
def log_int(k: int) -> Interval:
    """Enclosure of ``log k`` (cached)."""
    return Interval(k).log()
