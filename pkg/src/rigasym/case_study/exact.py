"""Exact and interval computations for small ``n``.

``F(n) = sum_k k sigma(k) (k^2 - 3n + 2)(2k^2 - n) binom(2n, n-k)`` is the sum
whose negativity for ``n >= 5`` is equivalent to ``a_n / C_n`` decreasing.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from gmpy2 import mpfr

from ..interval import DN, UP, Interval

__all__ = [
    "SigmaTable",
    "sigma_sieve",
    "normalized_F_exact",
    "robin_constant",
    "a_n_formula",
    "a_n_oracle",
    "F_exact",
    "normalized_F_enclosure",
    "SweepReport",
    "F_sign_sweep",
    "MonotonicityReport",
    "monotonicity_check",
]


class SigmaTable:
    """``sigma(1..M)`` from a divisor sieve."""

    def __init__(self, values: np.ndarray):
        self._v = values

    @property
    def size(self) -> int:
        return len(self._v) - 1

    def __len__(self):
        return self.size

    def __getitem__(self, k):
        if isinstance(k, slice):
            return self._v[k]
        if not 1 <= k <= self.size:
            raise IndexError(f"sigma table covers 1..{self.size}")
        return int(self._v[k])

    def array(self) -> np.ndarray:
        """Values as an int64 array indexed from 0 (entry 0 is unused)."""
        return self._v


def sigma_sieve(M: int) -> SigmaTable:
    if M < 1:
        raise ValueError("M must be positive")
    v = np.zeros(M + 1, dtype=np.int64)
    for d in range(1, M + 1):
        v[d::d] += d
    return SigmaTable(v)


@lru_cache(maxsize=8)
def _sigma_cached(M: int) -> SigmaTable:
    return sigma_sieve(M)


def _sigma_upto(M: int) -> SigmaTable:
    # round up so nearby calls share one sieve
    size = 1 << max(4, (M - 1).bit_length())
    return _sigma_cached(size)


def robin_constant(N: int = 10000, A=Fraction(52, 25)) -> Fraction:
    """Certify ``sigma(k) <= A k log log n`` for ``1 <= k <= n``, ``n >= N``.

    For ``k >= N`` Robin's inequality gives ``A >= e^gamma + 0.6483/log log N``;
    below ``N`` every ``k`` is checked against ``A k log log N``.
    """
    if N < 16:
        raise ValueError("need N >= 16 so that log log N > 0")
    A = Fraction(A)
    lln = Interval(N).log().log()
    euler = Interval._raw(DN.const_euler(), UP.const_euler())
    robin = euler.exp() + Interval(Fraction(6483, 10000)) / lln
    if not robin.hi <= Interval(A).lo:
        raise ValueError(f"A = {A} is below e^gamma + 0.6483/log log N = {float(robin.hi):.6f}")
    sig = _sigma_upto(N).array()[1 : N + 1].astype(float)
    k = np.arange(1, N + 1, dtype=float)
    # compare sigma(k)/k (exact in floats up to a relative ulp) with a lower bound for A log log N
    limit = float(DN.mul(Interval(A).lo, lln.lo))
    ratio = np.nextafter(sig / k, np.inf)
    bad = np.nonzero(ratio > limit)[0]
    if bad.size:
        raise ValueError(f"sigma(k) <= A k log log N fails first at k = {int(bad[0]) + 1}")
    return A


def a_n_formula(n: int) -> int:
    """Closed form ``sum_k 4k sigma(k)(2k^2-3n-2)(2n-1)! / ((n+1-k)!(n+1+k)!)``."""
    if n < 1:
        raise ValueError("n must be positive")
    sig = _sigma_upto(n + 1)
    f = math.factorial
    total = Fraction(0)
    top = f(2 * n - 1)
    for k in range(1, n + 2):
        total += Fraction(4 * k * sig[k] * (2 * k * k - 3 * n - 2) * top, f(n + 1 - k) * f(n + 1 + k))
    if total.denominator != 1:
        raise ArithmeticError(f"a_{n} came out non-integral: {total}")
    return int(total)


def a_n_oracle(n: int) -> int:
    """Dyck paths of length ``2n`` with a unique peak of maximum height, by dynamic programming.

    States are ``(height, max peak height, peaks at that height capped at 2, last step up)``.
    """
    if n > 30:
        raise ValueError("the oracle is meant for n <= 30")
    if n < 1:
        return 0
    states = {(0, 0, 0, False): 1}
    for _ in range(2 * n):
        nxt: dict = {}
        for (h, top, cnt, up), ways in states.items():
            nxt[(h + 1, top, cnt, True)] = nxt.get((h + 1, top, cnt, True), 0) + ways
            if h == 0:
                continue
            t, c = top, cnt
            if up:
                if h > top:
                    t, c = h, 1
                elif h == top:
                    c = min(cnt + 1, 2)
            key = (h - 1, t, c, False)
            nxt[key] = nxt.get(key, 0) + ways
        # paths must be able to return to 0
        states = nxt
    return sum(w for (h, _, c, _), w in states.items() if h == 0 and c == 1)


def _summand_weights(n: int, sig: np.ndarray | SigmaTable, k_max: int):
    for k in range(1, k_max + 1):
        yield k, k * int(sig[k]) * (k * k - 3 * n + 2) * (2 * k * k - n)


def F_exact(n: int) -> int:
    """``F(n)`` in exact integers, binomials by the ratio recurrence."""
    if n < 1:
        raise ValueError("n must be positive")
    sig = _sigma_upto(n)
    binom = math.comb(2 * n, n - 1)
    total = 0
    for k, w in _summand_weights(n, sig, n):
        total += w * binom
        binom = binom * (n - k) // (n + k + 1)
    return total


def normalized_F_exact(n: int, k_lo: int = 1, k_hi: int | None = None) -> Fraction:
    """``sum_{k_lo <= k <= k_hi}`` of the ``F(n)`` summands over ``binom(2n, n)``, exactly.

    Useful where the float enclosure underflows (``k`` near ``n``).
    """
    if n < 1:
        raise ValueError("n must be positive")
    k_lo = max(k_lo, 1)
    k_hi = n if k_hi is None else min(k_hi, n)
    if k_lo > k_hi:
        return Fraction(0)
    sig = _sigma_upto(k_hi)
    binom = math.comb(2 * n, n - k_lo)
    total = 0
    for k in range(k_lo, k_hi + 1):
        total += k * int(sig[k]) * (k * k - 3 * n + 2) * (2 * k * k - n) * binom
        binom = binom * (n - k) // (n + k + 1)
    return Fraction(total, math.comb(2 * n, n))


_U = 2.0**-53
_TINY = 1e-250


def _normalized_bounds(n: int, sig: np.ndarray, k_lo: int = 1, k_hi: int | None = None) -> tuple[float, float]:
    """Certified enclosure of ``sum_{k_lo <= k <= k_hi} k sigma(k)(k^2-3n+2)(2k^2-n) binom(2n,n-k)/binom(2n,n)``.

    Every rounding is accounted for: correctly rounded divisions are widened
    by one ulp, running products by ``(1 +- 3ku)``, the polynomial weights by
    ``3u`` and the final sums by ``2nu`` times the sum of magnitudes.
    """
    k_hi = n if k_hi is None else min(k_hi, n)
    k = np.arange(1, n + 1, dtype=float)
    ratio = np.empty(n)
    ratio[0] = n / (n + 1)
    ratio[1:] = (n - k[:-1]) / (n + k[:-1] + 1)
    r_lo = np.nextafter(ratio, 0.0)
    r_hi = np.nextafter(ratio, np.inf)
    p_lo = np.cumprod(r_lo) * (1 - 3 * k * _U)
    p_hi = np.cumprod(r_hi) * (1 + 3 * k * _U)
    tiny = p_hi < _TINY
    if tiny.any():
        # past this point the true ratios stay below the last certified value
        p_lo[tiny] = 0.0
        p_hi[tiny] = _TINY * 1.1
    s = sig[1 : n + 1].astype(float)
    w = k * s * (k * k - 3 * n + 2) * (2 * k * k - n)
    w_lo = w - np.abs(w) * 3 * _U
    w_hi = w + np.abs(w) * 3 * _U
    sl = slice(k_lo - 1, k_hi)
    w_lo, w_hi, p_lo, p_hi = w_lo[sl], w_hi[sl], p_lo[sl], p_hi[sl]
    prod_hi = np.where(w_hi >= 0, w_hi * p_hi, w_hi * p_lo)
    prod_lo = np.where(w_lo >= 0, w_lo * p_lo, w_lo * p_hi)
    prod_hi = prod_hi + np.abs(prod_hi) * 2 * _U
    prod_lo = prod_lo - np.abs(prod_lo) * 2 * _U
    m = len(prod_hi) + 2
    slack_hi = 2 * m * _U * float(np.sum(np.abs(prod_hi))) + 1e-300
    slack_lo = 2 * m * _U * float(np.sum(np.abs(prod_lo))) + 1e-300
    return math.fsum(prod_lo.tolist()) - slack_lo, math.fsum(prod_hi.tolist()) + slack_hi


def normalized_F_enclosure(n: int, k_lo: int = 1, k_hi: int | None = None) -> tuple[float, float]:
    """Enclosure of ``F(n) / binom(2n, n)``, optionally restricted to ``k_lo <= k <= k_hi``."""
    return _normalized_bounds(n, _sigma_upto(n).array(), k_lo, k_hi)


@dataclass
class SweepReport:
    rows: list[tuple[int, str, str]] = field(default_factory=list)
    failures: list[int] = field(default_factory=list)
    inconclusive: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.inconclusive

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "upper_bound", "method"])
            w.writerows(self.rows)


def F_sign_sweep(n_min: int = 5, n_max: int = 9999, exact_fallback: bool = True) -> SweepReport:
    """Certify ``F(n) < 0`` for ``n_min <= n <= n_max``.

    The bound reported is for ``F(n) / binom(2n, n)``; any ``n`` whose
    interval bound is not negative is decided by ``F_exact``.
    """
    if n_min < 5 or n_max < n_min:
        raise ValueError("need 5 <= n_min <= n_max")
    sig = _sigma_upto(n_max).array()
    rep = SweepReport()
    for n in range(n_min, n_max + 1):
        up = _normalized_bounds(n, sig)[1]
        if up < 0:
            rep.rows.append((n, repr(up), "interval"))
            continue
        if not exact_fallback:
            rep.inconclusive.append(n)
            rep.rows.append((n, repr(up), "inconclusive"))
            continue
        val = Fraction(F_exact(n), math.comb(2 * n, n))
        rep.rows.append((n, repr(float(val)), "exact"))
        if val >= 0:
            rep.failures.append(n)
    return rep


@dataclass
class MonotonicityReport:
    n_max: int
    violations: list[int]

    @property
    def ok(self) -> bool:
        return not self.violations


def monotonicity_check(n_max: int = 200) -> MonotonicityReport:
    """Exact check of ``(4n+2) a_n > (n+2) a_{n+1}`` for ``3 <= n <= n_max``."""
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    a = {n: a_n_formula(n) for n in range(3, n_max + 2)}
    bad = [n for n in range(3, n_max + 1) if not (4 * n + 2) * a[n] > (n + 2) * a[n + 1]]
    return MonotonicityReport(n_max, bad)
