"""Taylor expansions of catalog kernels with Lagrange-remainder B-terms.

Also hosts Bernoulli numbers and Faulhaber polynomials, which feed the power
sums appearing in the binomial-ratio exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable

import gmpy2

from ._bounds import ceil_sig
from .expansion import Expansion, ExactTerm, KPolynomial, _abs_bterms, argument_radius

__all__ = [
    "Kernel",
    "KERNELS",
    "get_kernel",
    "taylor_with_explicit_error",
    "bernoulli",
    "faulhaber",
    "exp_upper",
]


def _to_fraction(x) -> Fraction:
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


def exp_upper(r: Fraction) -> Fraction:
    """Rational upper bound of ``exp(r)`` (correctly rounded upward at 128 bits)."""
    r = Fraction(r)
    with gmpy2.context(precision=128, round=gmpy2.RoundUp):
        # one upward rounding of the exact rational, then an upward exp
        x = gmpy2.mpfr(gmpy2.mpq(r.numerator, r.denominator))
        return _to_fraction(gmpy2.exp(x))


@dataclass(frozen=True)
class Kernel:
    """Analytic function ``f(t) = sum c_i t^i`` near 0 with a Lagrange constant.

    ``bound(m, r)`` is a rational upper bound for ``sup_{|xi| <= r} |f^(m)(xi)| / m!``;
    ``radius`` is the radius of validity (``None`` for entire functions).
    """

    name: str
    coeff: Callable[[int], Fraction]
    bound: Callable[[int, Fraction], Fraction]
    radius: Fraction | None
    sympy_expr: str


def _even_geometric_bound(m: int, r: Fraction) -> Fraction:
    # f = (1/(1-t) + 1/(1+t))/2, and |f^(m)|/m! peaks at xi = r
    return (Fraction(1) / (1 - r) ** (m + 1) + (-1) ** m / (1 + r) ** (m + 1)) / 2


KERNELS: dict[str, Kernel] = {
    "exp": Kernel(
        "exp",
        lambda i: Fraction(1, factorial(i)),
        lambda m, r: exp_upper(r) / factorial(m),
        None,
        "exp(t)",
    ),
    "geometric": Kernel(
        "geometric",
        lambda i: Fraction(1),
        lambda m, r: Fraction(1) / (1 - r) ** (m + 1),
        Fraction(1),
        "1/(1-t)",
    ),
    "even_geometric": Kernel(
        "even_geometric",
        lambda i: Fraction(1 - i % 2),
        _even_geometric_bound,
        Fraction(1),
        "1/(1-t**2)",
    ),
    "log1p": Kernel(
        "log1p",
        lambda i: Fraction(0) if i == 0 else Fraction((-1) ** (i + 1), i),
        lambda m, r: Fraction(1, m) / (1 - r) ** m if m > 0 else Fraction(0),
        Fraction(1),
        "log(1+t)",
    ),
}


def get_kernel(name: str) -> Kernel:
    try:
        return KERNELS[name]
    except KeyError:
        raise KeyError(f"unknown kernel {name!r}; choose from {sorted(KERNELS)}") from None


def taylor_with_explicit_error(
    kernel: Kernel | str,
    arg: Expansion,
    order: int,
    valid_from: int,
    lagrange_sig_digits: int | None = 1,
) -> Expansion:
    """``f(arg)`` as ``sum_{i<order} c_i arg^i`` plus a Lagrange B-term.

    The remainder is ``M * |arg^order|``, where the expansion of ``arg^order``
    has each term replaced by its absolute majorant, and ``M`` bounds ``|f^(order)|/order!``
    on ``[-r, r]``, ``r`` being the argument radius at ``valid_from``.  ``M`` is
    rounded up to ``lagrange_sig_digits`` significant digits, or onto the ring's
    B-term grid when that is ``None``.
    """
    if isinstance(kernel, str):
        kernel = get_kernel(kernel)
    if order < 1:
        raise ValueError("order must be at least 1")
    cfg = arg.config
    one = Expansion(cfg, [ExactTerm(KPolynomial(1), Fraction(0))])
    if arg.is_zero():
        return one * kernel.coeff(0)
    r = argument_radius(arg, valid_from)
    if kernel.radius is not None and r >= kernel.radius:
        raise ValueError(
            f"argument radius {float(r):.6g} at valid_from={valid_from} "
            f"exceeds the {kernel.name} kernel radius {kernel.radius}"
        )
    m = kernel.bound(order, r)
    m = ceil_sig(m, lagrange_sig_digits) if lagrange_sig_digits else cfg.round(m)
    total = one * kernel.coeff(0)
    power = one
    for i in range(1, order):
        power = power * arg
        c = kernel.coeff(i)
        if c:
            total = total + power * c
    remainder = _abs_bterms(power * arg, valid_from) * m
    return total + remainder


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number with ``B_1 = -1/2``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return Fraction(1)
    if m > 1 and m % 2:
        return Fraction(0)
    return -sum(comb(m + 1, j) * bernoulli(j) for j in range(m)) / (m + 1)


@lru_cache(maxsize=None)
def faulhaber(r: int) -> KPolynomial:
    """Polynomial ``P`` with ``P(k) = sum_{j=1}^k j^r``."""
    if r < 1:
        raise ValueError("r must be at least 1")
    coeffs = {r + 1 - j: Fraction(comb(r + 1, j)) * (-1) ** j * bernoulli(j) / (r + 1) for j in range(r + 1)}
    return KPolynomial(coeffs)
