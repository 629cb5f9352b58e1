"""Exact upward rounding of sums of rational multiples of rational powers.

Absorbing a term into a B-term produces constants such as ``3 + 10**(-3/7)``.
These are represented as a rational part plus a list of ``(c, base, exp)``
pieces and rounded up onto a decimal grid with integer arithmetic only.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

import gmpy2

#: grid used when no rounding was requested but the value is irrational
FALLBACK_DIGITS = 30


def _floor_scaled_power(base: int, exp: Fraction, scale: int) -> int:
    """floor(scale * base**exp) for integer base >= 1 and scale >= 1."""
    p, q = exp.numerator, exp.denominator
    if p >= 0:
        num, den = scale**q * base**p, 1
    else:
        num, den = scale**q, base ** (-p)
    root, _ = gmpy2.iroot(gmpy2.mpz(num // den), q)
    return int(root)


class UpperSum:
    """Accumulates ``rational + sum c_i * base_i**exp_i`` with ``c_i >= 0``."""

    __slots__ = ("rational", "powers")

    def __init__(self, rational=0, powers=()):
        self.rational = Fraction(rational)
        self.powers = list(powers)

    def add(self, c, base=1, exp=0):
        c, exp = Fraction(c), Fraction(exp)
        if c == 0:
            return self
        if c < 0:
            raise ValueError("only non-negative irrational pieces are supported")
        if exp.denominator == 1 or base == 1:
            self.rational += c * Fraction(base) ** exp
        else:
            self.powers.append((c, int(base), exp))
        return self

    def __iadd__(self, other: "UpperSum"):
        self.rational += other.rational
        self.powers.extend(other.powers)
        return self

    @property
    def is_rational(self) -> bool:
        return not self.powers

    def _bracket(self, scale: int) -> tuple[int, int]:
        """Integers L, U with L <= scale*value <= U."""
        lo = hi = Fraction(0)
        for c, base, exp in self.powers:
            f = _floor_scaled_power(base, exp, scale)
            lo += c * f
            hi += c * (f + 1)
        r = self.rational * scale
        return floor(lo + r), ceil(hi + r)

    def ceil_to(self, digits: int) -> Fraction:
        """Smallest multiple of 10**-digits that is >= the value."""
        grid = 10**digits
        if self.is_rational:
            return Fraction(ceil(self.rational * grid), grid)
        for guard in (10, 25, 50, 100):
            scale = grid * 10**guard
            lo, hi = self._bracket(scale)
            m_lo = -((-lo * grid) // scale)
            m_hi = -((-hi * grid) // scale)
            if m_lo == m_hi:
                return Fraction(m_hi, grid)
        return Fraction(m_hi, grid)

    def upper(self, digits: int | None) -> Fraction:
        """Rational upper bound: grid ceiling, or exact when rational and ``digits`` is None."""
        if digits is None:
            if self.is_rational:
                return self.rational
            return self.ceil_to(FALLBACK_DIGITS)
        return self.ceil_to(digits)

    def __float__(self):
        return float(self.rational) + sum(float(c) * base ** float(e) for c, base, e in self.powers)


def round_up_constant(x, digits: int | None = None) -> Fraction:
    """Round a non-negative rational up onto the ``10**-digits`` grid.

    >>> round_up_constant(Fraction(222301, 10**7), 4)
    Fraction(223, 10000)
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("round_up_constant expects a non-negative value")
    if digits is None:
        return x
    return UpperSum(x).ceil_to(digits)


def power_upper(base, exp, digits: int = FALLBACK_DIGITS) -> Fraction:
    """Rational upper bound for ``base**exp`` (base a positive integer)."""
    return UpperSum().add(1, base, exp).upper(digits)


def ceil_sig(x: Fraction, sig: int) -> Fraction:
    """Round a positive rational up to ``sig`` significant decimal digits."""
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    e = 0
    while x >= Fraction(10) ** (e + 1):
        e += 1
    while x < Fraction(10) ** e:
        e -= 1
    digits = sig - 1 - e
    if digits >= 0:
        return Fraction(ceil(x * 10**digits), 10**digits)
    unit = 10 ** (-digits)
    return Fraction(ceil(x / unit) * unit)
