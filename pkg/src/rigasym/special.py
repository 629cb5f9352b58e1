"""Certified enclosures of zeta, Gamma and digamma on complex boxes.

Zeta uses Euler-Maclaurin summation with Backlund's remainder bound, and the
functional equation for boxes left of Re = -1/2.  Gamma and digamma shift the
argument to Re >= 20 and apply Stirling's series with the sectorial remainder
bound ``|R_K(z)| <= |B_2K| / (2K(2K-1)|z|^(2K-1)) * sec^(2K)(arg(z)/2)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from gmpy2 import mpfr

from .interval import DN, PI, UP, ComplexInterval, Interval, IntervalError, log_int
from .taylor import bernoulli

__all__ = [
    "zeta_enclosure",
    "zeta_with_derivative",
    "gamma_enclosure",
    "loggamma_enclosure",
    "log_abs_gamma",
    "digamma_enclosure",
    "trigamma_enclosure",
    "logzeta_curvature_bound",
]

EM_TERMS = 20
STIRLING_TERMS = 12
SHIFT_TO = 20

_HALF = Interval(Fraction(1, 2))
_LOG2 = log_int(2)
_LOGPI = PI.log()
_LOG2PI_HALF = (PI * 2).log() * _HALF


@lru_cache(maxsize=None)
def _em_coeff(j: int) -> Interval:
    # B_{2j} / (2j)!
    return Interval(bernoulli(2 * j) / math.factorial(2 * j))


@lru_cache(maxsize=None)
def _stirling_coeff(k: int) -> Interval:
    # B_{2k} / (2k (2k-1))
    return Interval(bernoulli(2 * k) / (2 * k * (2 * k - 1)))


@lru_cache(maxsize=None)
def _digamma_coeff(k: int) -> Interval:
    return Interval(bernoulli(2 * k) / (2 * k))


def _box(s) -> ComplexInterval:
    return ComplexInterval.coerce(s)


def _npow(n: int, s: ComplexInterval) -> ComplexInterval:
    """``n^(-s)``."""
    ln = log_int(n)
    mod = (-(s.re * ln)).exp()
    ang = s.im * ln
    return ComplexInterval(mod * ang.cos(), -(mod * ang.sin()))


def _em_remainder(s: ComplexInterval, N: int, M: int) -> Interval:
    """Backlund bound on the Euler-Maclaurin tail after ``M`` Bernoulli terms."""
    sig = s.re.lo
    denom = DN.add(sig, 2 * M + 1)
    if denom <= 0:
        raise IntervalError(
            f"Euler-Maclaurin remainder diverges: Re(s) >= {float(sig):.4g} needs more than {M} correction terms"
        )
    prod = Interval(1)
    for j in range(2 * M + 2):
        prod = prod * abs(s + j)
    b = abs(_em_coeff(M + 1))
    npow = (-(Interval(sig) + (2 * M + 1)) * log_int(N)).exp()
    bound = prod * b * npow / Interval(denom)
    return Interval._raw(mpfr(0), bound.hi)


def _zeta_em(s: ComplexInterval, N: int, M: int, derivative: bool):
    if s.re.contains(1) and s.im.contains_zero():
        raise IntervalError("zeta enclosure requested on a box containing the pole s = 1")
    total = ComplexInterval(0)
    dtotal = ComplexInterval(0)
    for n in range(2, N):
        t = _npow(n, s)
        total = total + t
        if derivative:
            dtotal = dtotal - t * log_int(n)
    total = total + 1
    lnN = log_int(N)
    nps = _npow(N, s)
    sm1 = s - 1
    inv_sm1 = sm1.reciprocal()
    head = nps * N * inv_sm1
    total = total + head + nps * _HALF
    if derivative:
        dtotal = dtotal - head * lnN - head * inv_sm1 - nps * _HALF * lnN
    # rising factorial s(s+1)...(s+2j-2) times N^(-s-2j+1)
    rising = s
    npow = nps / N
    dlog = s.reciprocal() if derivative else None
    invN2 = Interval(Fraction(1, N * N))
    for j in range(1, M + 1):
        term = rising * npow * _em_coeff(j)
        total = total + term
        if derivative:
            dtotal = dtotal + term * (dlog - lnN)
        rising = rising * (s + (2 * j - 1)) * (s + 2 * j)
        npow = npow * invN2
        if derivative:
            dlog = dlog + (s + (2 * j - 1)).reciprocal() + (s + 2 * j).reciprocal()
    r = _em_remainder(s, N, M)
    total = ComplexInterval(total.re + Interval._raw(DN.minus(r.hi), r.hi), total.im + Interval._raw(DN.minus(r.hi), r.hi))
    if not derivative:
        return total
    # Cauchy estimate on the remainder over a disc of radius 1/4
    grown = ComplexInterval(
        Interval._raw(DN.sub(s.re.lo, 0.25), UP.add(s.re.hi, 0.25)), Interval._raw(DN.sub(s.im.lo, 0.25), UP.add(s.im.hi, 0.25))
    )
    rd = UP.mul(_em_remainder(grown, N, M).hi, 4)
    dtotal = ComplexInterval(dtotal.re + Interval._raw(DN.minus(rd), rd), dtotal.im + Interval._raw(DN.minus(rd), rd))
    return total, dtotal


def _default_terms(s: ComplexInterval, terms: int) -> int:
    t = float(s.im.mag())
    return max(terms, int(t / math.pi) + 8)


def zeta_enclosure(s, terms: int = 32, correction_terms: int = EM_TERMS) -> ComplexInterval:
    """Enclosure of ``zeta(s)`` for every ``s`` in the box.

    ``terms`` is the number of directly summed terms (raised automatically to
    about ``|Im s|/pi`` so the Bernoulli series converges).  Boxes with
    ``Re(s) <= -1/2`` go through the functional equation.
    """
    s = _box(s)
    if s.re.hi <= -0.5:
        return _zeta_reflected(s, terms, correction_terms)
    return _zeta_em(s, _default_terms(s, terms), correction_terms, False)


def zeta_with_derivative(s, terms: int = 32, correction_terms: int = EM_TERMS):
    """Enclosures of ``(zeta(s), zeta'(s))`` on a box with ``Re(s) > -1/2``."""
    s = _box(s)
    return _zeta_em(s, _default_terms(s, terms), correction_terms, True)


def _cpow_real(base_log: Interval, s: ComplexInterval) -> ComplexInterval:
    """``b^s`` from an enclosure of ``log b``."""
    return ComplexInterval(s.re * base_log, s.im * base_log).exp()


def _zeta_reflected(s: ComplexInterval, terms: int, correction_terms: int) -> ComplexInterval:
    one_minus = 1 - s
    z = _zeta_em(one_minus, _default_terms(one_minus, terms), correction_terms, False)
    g = gamma_enclosure(one_minus)
    chi = _cpow_real(_LOG2, s) * _cpow_real(_LOGPI, s - 1) * (s * (PI * _HALF)).sin()
    return chi * g * z


# --------------------------------------------------------------------- Gamma
def _check_gamma_box(s: ComplexInterval) -> None:
    if s.im.contains_zero() and s.re.lo <= 0:
        lo, hi = math.floor(float(s.re.lo)), math.ceil(float(s.re.hi))
        for m in range(min(lo, 0), min(hi, 0) + 1):
            if s.re.contains(m):
                raise IntervalError(f"Gamma enclosure requested on a box touching the pole at {m}")


def _shift_count(s: ComplexInterval) -> int:
    lo = float(s.re.lo)
    return max(0, math.ceil(SHIFT_TO - lo))


def _sec2_half_arg(z: ComplexInterval) -> Interval:
    # sec^2(theta/2) = 2|z| / (|z| + Re z), increasing in |z| and decreasing in Re z
    r = abs(z).hi
    return Interval._raw(mpfr(1), UP.div(UP.mul(2, r), DN.add(r, z.re.lo)))


def _stirling_log(z: ComplexInterval, K: int) -> ComplexInterval:
    if z.re.lo < SHIFT_TO / 2:
        raise IntervalError("Stirling series applied too close to the imaginary axis")
    logz = z.log()
    val = (z - _HALF) * logz - z + _LOG2PI_HALF
    inv = z.reciprocal()
    inv2 = inv * inv
    p = inv
    for k in range(1, K):
        val = val + p * _stirling_coeff(k)
        p = p * inv2
    # remainder: |B_2K| / (2K(2K-1)) |z|^(1-2K) sec^(2K)(theta/2)
    mod_lo = abs(z).lo
    rem = abs(_stirling_coeff(K)) * Interval._raw(mpfr(0), UP.pow(UP.div(1, mod_lo), 2 * K - 1))
    rem = rem * _sec2_half_arg(z) ** K
    return ComplexInterval(val.re + Interval._raw(DN.minus(rem.hi), rem.hi), val.im + Interval._raw(DN.minus(rem.hi), rem.hi))


def loggamma_enclosure(s, stirling_terms: int = STIRLING_TERMS) -> ComplexInterval:
    """Enclosure of a logarithm of ``Gamma(s)``.

    The real part is ``log|Gamma(s)|``; the imaginary part is an argument of
    ``Gamma(s)`` determined modulo ``2*pi`` (which is all ``exp`` needs).
    """
    s = _box(s)
    _check_gamma_box(s)
    m = _shift_count(s)
    val = _stirling_log(s + m, stirling_terms)
    if m == 0:
        return val
    prod = ComplexInterval(1)
    for j in range(m):
        prod = prod * (s + j)
    # log|prod| from the modulus, the argument from a principal log of the product
    lre = prod.abs2().log() * _HALF
    if prod.re.lo > 0:
        lim = prod.log().im
    else:
        lim = Interval(-4, 4) * PI  # unreachable in practice; keeps the modulus exact
    return ComplexInterval(val.re - lre, val.im - lim)


def log_abs_gamma(s, stirling_terms: int = STIRLING_TERMS) -> Interval:
    """Enclosure of ``log|Gamma(s)|``."""
    s = _box(s)
    _check_gamma_box(s)
    m = _shift_count(s)
    val = _stirling_log(s + m, stirling_terms).re
    for j in range(m):
        val = val - (s + j).abs2().log() * _HALF
    return val


def gamma_enclosure(s, stirling_terms: int = STIRLING_TERMS) -> ComplexInterval:
    """Enclosure of ``Gamma(s)``; fails on boxes touching a non-positive integer."""
    s = _box(s)
    _check_gamma_box(s)
    m = _shift_count(s)
    val = _stirling_log(s + m, stirling_terms).exp()
    if m == 0:
        return val
    prod = ComplexInterval(1)
    for j in range(m):
        prod = prod * (s + j)
    return val / prod


def digamma_enclosure(s, terms: int = STIRLING_TERMS) -> ComplexInterval:
    """Enclosure of ``psi(s) = Gamma'(s)/Gamma(s)``.

    The Stirling remainder derivative is bounded by a Cauchy estimate on a
    disc of radius ``Re(z)/2`` around the shifted argument.
    """
    s = _box(s)
    _check_gamma_box(s)
    m = _shift_count(s)
    z = s + m
    inv = z.reciprocal()
    inv2 = inv * inv
    val = z.log() - inv * _HALF
    p = inv2
    for k in range(1, terms):
        val = val - p * _digamma_coeff(k)
        p = p * inv2
    # on |u - z| = rho with rho = Re(z)/2: |u| >= |z| - rho, Re u > 0 so sec^2 <= 2
    rho = DN.div(z.re.lo, 2)
    umin = DN.sub(abs(z).lo, rho)
    rem = UP.mul(abs(_stirling_coeff(terms)).hi, UP.pow(UP.div(1, umin), 2 * terms - 1))
    rem = UP.div(UP.mul(rem, UP.pow(mpfr(2), terms)), rho)
    val = ComplexInterval(val.re + Interval._raw(DN.minus(rem), rem), val.im + Interval._raw(DN.minus(rem), rem))
    for j in range(m):
        val = val - (s + j).reciprocal()
    return val


def trigamma_enclosure(s, terms: int = STIRLING_TERMS) -> ComplexInterval:
    """Enclosure of ``psi'(s)``, with the same shift and Cauchy-estimate scheme as the digamma."""
    s = _box(s)
    _check_gamma_box(s)
    m = _shift_count(s)
    z = s + m
    inv = z.reciprocal()
    inv2 = inv * inv
    val = inv + inv2 * _HALF
    p = inv2 * inv
    for k in range(1, terms):
        val = val + p * _em_coeff_raw(k)
        p = p * inv2
    rho = DN.div(z.re.lo, 2)
    umin = DN.sub(abs(z).lo, rho)
    rem = UP.mul(abs(_stirling_coeff(terms)).hi, UP.pow(UP.div(1, umin), 2 * terms - 1))
    rem = UP.div(UP.mul(UP.mul(rem, UP.pow(mpfr(2), terms)), 2), UP.mul(rho, rho))
    val = ComplexInterval(val.re + Interval._raw(DN.minus(rem), rem), val.im + Interval._raw(DN.minus(rem), rem))
    for j in range(m):
        val = val + (s + j).reciprocal() ** 2
    return val


@lru_cache(maxsize=None)
def _em_coeff_raw(k: int) -> Interval:
    return Interval(bernoulli(2 * k))


_LAMBDA_CUTOFF = 200_000


@lru_cache(maxsize=1)
def _von_mangoldt_table() -> np.ndarray:
    n = _LAMBDA_CUTOFF
    lam = np.zeros(n + 1)
    composite = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if composite[p]:
            continue
        composite[p * p :: p] = True
        pk = p
        while pk <= n:
            lam[pk] = math.log(p)
            pk *= p
    return lam


@lru_cache(maxsize=None)
def logzeta_curvature_bound(sigma) -> Fraction:
    """Upper bound for ``|(zeta'/zeta)'(s)|`` on ``Re s >= sigma > 1``.

    This is ``sum Lambda(n) log(n) n^-sigma``: summed in floating point up to
    a cutoff (relative error far below the 1e-9 margin added), plus the
    integral of ``log(t)^2 t^-sigma`` beyond it.
    """
    sigma = Fraction(sigma)
    if sigma <= 1:
        raise ValueError("the Dirichlet series needs sigma > 1")
    lam = _von_mangoldt_table()
    n = np.arange(len(lam), dtype=float)
    n[0] = 1.0
    head = float(np.sum(lam * np.log(n) * n ** (-float(sigma))))
    P = float(_LAMBDA_CUTOFF)
    a = float(sigma) - 1
    L = math.log(P)
    if L * float(sigma) < 2:
        raise ValueError("cutoff inside the increasing range of log(t)^2 t^-sigma")
    tail = P ** (-a) * (L * L / a + 2 * L / a**2 + 2 / a**3)
    return Fraction((head + tail) * (1 + 1e-9)).limit_denominator(10**12) + Fraction(1, 10**9)
