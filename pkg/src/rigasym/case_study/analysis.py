"""Asymptotic half of the case study: expansion, tail bounds and assembly.

The normalized sum ``F(n)/binom(2n,n)`` is split by the size of ``k``:

* ``k > n/2`` and ``n^alpha <= k <= n/2`` are pruned with Gaussian tail bounds;
* for ``k < n^alpha`` the binomial ratio is replaced by ``S(n,k) e^(-k^2/n)``
  with an explicit B-term error ``S_B``;
* the replaced sum is completed to all ``k >= 1`` (two more tail bounds) and
  handed to the Mellin machinery, which yields the main term plus ``C n^(3/4)``.

Every piece is a :class:`BoundExpr` valid for ``n >= N``; :func:`combine_errors`
collapses them onto ``n^(3/4)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .._bounds import ceil_sig, power_upper
from ..expansion import AsymptoticRing, BTerm, Expansion, KPolynomial
from ..interval import PI, Interval, log_int
from ..taylor import faulhaber, taylor_with_explicit_error
from .exact import normalized_F_enclosure, robin_constant

__all__ = [
    "BoundError",
    "CaseConfig",
    "BoundExpr",
    "BoundSum",
    "BinomialRatio",
    "binomial_ratio_expansion",
    "gaussian_sum_bound",
    "gaussian_tail_integral",
    "prune_tail_bounds",
    "sb_error_bound",
    "c1_bound",
    "completion_bounds",
    "lln_power_check",
    "combine_errors",
    "MULTIPLIER",
    "TheoremReport",
    "main_theorem",
]

SIG = 8  # significant digits kept when a constant is rounded up


class BoundError(ArithmeticError):
    """A side condition of the bound calculus failed."""


def _F(x) -> Fraction:
    return Fraction(x)


def _pow_geq(N: int, p: Fraction, c: Fraction) -> bool:
    """Exact test of ``N**p >= c`` for rational ``p >= 0`` and ``c >= 0``."""
    if c <= 0:
        return True
    if p == 0:
        return c <= 1
    a, b = p.numerator, p.denominator
    return Fraction(N) ** a >= c**b


@dataclass(frozen=True)
class CaseConfig:
    N: int = 10000
    alpha_split: Fraction = Fraction(7, 10)
    beta: Fraction = Fraction(7, 10)
    R: int = 9
    A: Fraction = Fraction(52, 25)
    exp_order: int = 6
    geometric_order: int = 6
    round_digits: int = 4

    def __post_init__(self):
        for name in ("alpha_split", "beta", "A"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.R < 3 or self.R % 2 == 0:
            raise ValueError("R must be odd and at least 3")
        if not (Fraction(1, 2) < self.alpha_split <= self.beta < 1):
            raise ValueError("need 1/2 < alpha_split <= beta < 1")
        if self.N < 16:
            raise ValueError("N must be at least 16")
        # k >= n^alpha implies k^2 >= 3n once N^(2 alpha - 1) >= 3
        if not _pow_geq(self.N, 2 * self.alpha_split - 1, Fraction(3)):
            raise BoundError(f"k^2 >= 3n fails for k >= n^{self.alpha_split} at N={self.N}")


# ---------------------------------------------------------------- BoundExpr
def _npow(n, q) -> Interval:
    q = Fraction(q)
    if q == 0:
        return Interval(1)
    return (log_int(n) * Interval(q)).exp()


def _lln(n: int) -> Interval:
    return log_int(n).log()


def _sup_power_exp(p: Fraction, e: Fraction, gamma: Fraction, N: int) -> Interval:
    """Enclosure of ``sup_{n >= N} n^p exp(e n^gamma)`` (``e <= 0``)."""
    if e == 0:
        if p > 0:
            raise BoundError(f"n^{p} is unbounded")
        return _npow(N, p)
    # log derivative p/n + e*gamma*n^(gamma-1) vanishes once n^gamma = p/(-e gamma)
    crit = p / (-e * gamma) if p > 0 else Fraction(0)
    if p <= 0 or _pow_geq(N, gamma, crit):
        return _npow(N, p) * (Interval(e) * _npow(N, gamma)).exp()
    # maximum at the critical point: n^p e^{e n^gamma} = exp((p/gamma)(log crit - 1))
    return (Interval(p / gamma) * (Interval(crit).log() - Interval(1))).exp()


@dataclass(frozen=True)
class BoundExpr:
    """``C n^q exp(e n^gamma) (log log n)^m``; ``gamma`` is ignored when ``e == 0``."""

    C: Fraction
    q: Fraction
    e: Fraction = Fraction(0)
    gamma: Fraction = Fraction(1)
    m: int = 0
    label: str = ""

    def __post_init__(self):
        for name in ("C", "q", "e", "gamma"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.C < 0 or self.e > 0 or self.gamma <= 0 or self.m < 0:
            raise ValueError(f"malformed bound {self}")
        if self.e == 0:
            object.__setattr__(self, "gamma", Fraction(1))

    @property
    def shape(self) -> tuple[Fraction, Fraction]:
        return self.e, self.gamma

    def value(self, n: int) -> Interval:
        v = Interval(self.C) * _npow(n, self.q)
        if self.e:
            v = v * (Interval(self.e) * _npow(n, self.gamma)).exp()
        if self.m:
            v = v * _lln(n) ** self.m
        return v

    def scale(self, c=1, dq=0, dm: int = 0) -> "BoundExpr":
        return replace(self, C=self.C * _F(c), q=self.q + _F(dq), m=self.m + dm)

    def collapse(self, q, N: int, e=0, gamma=1, m: int | None = None) -> "BoundExpr":
        """Smallest convenient ``C'`` with ``self <= C' n^q exp(e n^gamma) (lln)^m`` for ``n >= N``.

        Surplus powers of ``log log n`` are traded for ``n^(1/10)`` (see
        :func:`lln_power_check`).
        """
        q, e, gamma = Fraction(q), Fraction(e), Fraction(gamma)
        if e == 0:
            gamma = Fraction(1)
        m = self.m if m is None else m
        if self.C == 0:
            return BoundExpr(Fraction(0), q, e, gamma, m, self.label)
        extra = max(self.m - m, 0)
        if extra:
            lln_power_check(N)
        p = self.q - q + Fraction(extra, 10)
        if (self.e, self.gamma) == (e, gamma):
            factor = _sup_power_exp(p, Fraction(0), Fraction(1), N)
        elif e == 0:
            factor = _sup_power_exp(p, self.e, self.gamma, N)
        else:
            raise BoundError(f"cannot collapse {self.describe()} onto exp({e} n^{gamma})")
        # (lln)^(self.m - m) <= 1 when m >= self.m because log log N >= 1
        C = ceil_sig((Interval(self.C) * factor).upper_fraction(), SIG)
        return BoundExpr(C, q, e, gamma, m, self.label)

    def describe(self) -> str:
        s = f"{float(self.C):.6g} n^{self.q}"
        if self.e:
            s += f" exp({self.e} n^{self.gamma})"
        if self.m:
            s += " loglog(n)" + (f"^{self.m}" if self.m > 1 else "")
        return s

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "C": str(self.C),
            "C_decimal": float(self.C),
            "q": str(self.q),
            "e": str(self.e),
            "gamma": str(self.gamma),
            "m": self.m,
        }


class BoundSum(tuple):
    """A finite sum of :class:`BoundExpr` terms."""

    def __new__(cls, terms: Iterable[BoundExpr] = ()):
        return super().__new__(cls, tuple(terms))

    def __add__(self, other):
        return BoundSum(tuple(self) + tuple(other))

    def value(self, n: int) -> Interval:
        v = Interval(0)
        for t in self:
            v = v + t.value(n)
        return v

    def scale(self, c=1, dq=0, dm: int = 0) -> "BoundSum":
        return BoundSum(t.scale(c, dq, dm) for t in self)

    def collapse(self, q, N: int, e=0, gamma=1, m: int | None = None, label: str = "") -> BoundExpr:
        total = Fraction(0)
        for t in self:
            c = t.collapse(q, N, e, gamma, m)
            total += c.C
            e, gamma, m = c.e, c.gamma, c.m
        return BoundExpr(total, q, e, gamma, m if m is not None else 0, label)


def lln_power_check(N: int) -> None:
    """Certify ``log log n <= n^(1/10)`` and ``log log N >= 1`` for all ``n >= N``.

    ``g(n) = n^(1/10) - log log n`` has ``g'(n) >= 0`` iff ``n^(1/10) log n >= 10``,
    a condition increasing in ``n``; so checking it and ``g(N) > 0`` at ``N`` suffices.
    """
    L = log_int(N)
    root = (L * Interval(Fraction(1, 10))).exp()
    if not (root * L).lo >= 10:
        raise BoundError(f"n^(1/10) log n >= 10 not certified at N={N}")
    if not (root - L.log()).lo > 0:
        raise BoundError(f"log log N <= N^(1/10) not certified at N={N}")
    if not L.log().lo >= 1:
        raise BoundError(f"log log N >= 1 not certified at N={N}")


# ------------------------------------------------------ Gaussian sum bounds
def _up(x: Interval) -> Fraction:
    return ceil_sig(x.upper_fraction(), SIG + 4)


def _half_gamma(j: int) -> Interval:
    """``Gamma((j+1)/2) / 2``."""
    if j % 2 == 1:
        return Interval(Fraction(math.factorial((j - 1) // 2), 2))
    m = j // 2
    return Interval(Fraction(math.factorial(2 * m), 2 * 4**m * math.factorial(m))) * PI.sqrt()


def _closed_tail(j: int, tau: Fraction) -> list[BoundExpr]:
    """Terms of ``int_T^oo t^j e^(-t^2/n) dt`` for odd ``j`` and ``T = n^tau``."""
    mm = (j - 1) // 2
    g = 2 * tau - 1
    return [
        BoundExpr(Fraction(math.factorial(mm), 2 * math.factorial(i)), mm + 1 + i * g, -1, g)
        for i in range(mm + 1)
    ]


def gaussian_sum_bound(j: int, T=None, N: int = 10000) -> BoundSum:
    """Bound for ``sum_k k^j e^(-k^2/n)``.

    Without ``T`` the sum runs over ``k >= 1``; with ``T`` (an exponent, meaning
    the cutoff ``n^T``) over ``k >= n^T``.  ``t^j e^(-t^2/n)`` increases up to
    ``t0 = sqrt(jn/2)`` and decreases after, so the sum is at most the maximum of
    the summand plus the integral over the range.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    if T is None:
        if j == 0:
            peak = BoundExpr(Fraction(1), 0)
        else:
            c = (Interval(Fraction(j, 2)).log() * Interval(Fraction(j, 2)) - Interval(Fraction(j, 2))).exp()
            peak = BoundExpr(_up(c), Fraction(j, 2))
        return BoundSum([peak, BoundExpr(_up(_half_gamma(j)), Fraction(j + 1, 2))])
    tau = Fraction(T)
    # T >= t0 for every n >= N: tau >= 1/2 and N^(2 tau - 1) >= j/2
    if tau < Fraction(1, 2) or not _pow_geq(N, 2 * tau - 1, Fraction(j, 2)):
        raise BoundError(f"cutoff n^{tau} lies in the increasing regime of k^{j} e^(-k^2/n)")
    g = 2 * tau - 1
    head = BoundExpr(Fraction(1), j * tau, -1, g)
    if j % 2 == 1:
        return BoundSum([head] + _closed_tail(j, tau))
    # t^j <= t^(j+1) / T on [T, oo)
    return BoundSum([head] + [t.scale(1, -tau) for t in _closed_tail(j + 1, tau)])


def gaussian_tail_integral(j: int, T, n) -> Interval:
    """``int_T^oo t^j e^(-t^2/n) dt`` for odd ``j``, in closed form."""
    if j % 2 != 1:
        raise ValueError("closed form needs odd j")
    mm = (j - 1) // 2
    x = Interval(Fraction(T)) ** 2 / Interval(Fraction(n))
    s, term = Interval(0), Interval(1)
    for i in range(mm + 1):
        if i:
            term = term * x / Interval(i)
        s = s + term
    return Interval(Fraction(math.factorial(mm), 2) * Fraction(n) ** (mm + 1)) * (-x).exp() * s


# ------------------------------------------------------- the expansion
@dataclass
class BinomialRatio:
    """``binom(2n,n-k)/binom(2n,n) * e^(k^2/n) = S + S_B`` for ``k <= n^beta``, ``n >= N``."""

    ring: AsymptoticRing
    full: Expansion
    exact: Expansion
    bterms: list[BTerm]
    tail: Expansion

    def S(self, n, k) -> Fraction:
        n, k = Fraction(n), Fraction(k)
        return sum(
            (t.coeff(k) * n**t.q for t in self.exact.exact_terms()),
            Fraction(0),
        )

    def monomials(self) -> list[tuple[int, Fraction, Fraction]]:
        """``(i, c, q)`` for each ``c k^i n^q`` in the exact part."""
        return [(d, c, t.q) for t in self.exact.exact_terms() for d, c in t.coeff.items()]

    def bterm_monomials(self) -> list[tuple[int, Fraction, Fraction]]:
        return [(d, c, b.q) for b in self.bterms for d, c in b.majorant.items()]


def binomial_ratio_expansion(cfg: CaseConfig = CaseConfig()) -> BinomialRatio:
    """Expansion of the central binomial ratio against the Gaussian factor.

    ``log(binom(2n,n-k)/binom(2n,n)) = log(n/(n-k)) - sum_{j<k} 2 artanh(j/n) - ...``
    reduces, after Faulhaber summation of the odd powers below ``R``, to
    ``-k^2/n - sum_r 2 P_r(k)/(r n^r)`` plus a tail of size at most
    ``2 (k^R + k^(R+1)/(R+1)) / (R n^R (1 - k^2/n^2))``.
    """
    N, R = cfg.N, cfg.R
    ring = AsymptoticRing(0, cfg.beta, cfg.round_digits)
    n, k = ring.gens()
    # 1/(1 - k^2/n^2) <= 1/(1 - N^(2 beta - 2)) for k <= n^beta
    fac = 1 / (1 - power_upper(N, 2 * cfg.beta - 2, 30))
    arg = -k / n
    for r in range(3, R, 2):
        arg = arg - ring.monomial(faulhaber(r) * Fraction(2, r), -r)
    tail = ring.B(
        ring.monomial(KPolynomial({R: Fraction(2, R) * fac, R + 1: Fraction(2, R * (R + 1)) * fac}), -R), N
    )
    arg = arg - tail
    E = taylor_with_explicit_error("exp", arg, cfg.exp_order, N)
    G = taylor_with_explicit_error("geometric", k / n, cfg.geometric_order, N)
    full = E * G
    if full.oterm() is not None:
        raise BoundError("expansion lost explicit control (O-term present)")
    bad = [b for b in full.bterms() if b.valid_from > N]
    if bad:
        raise BoundError(f"B-terms only valid beyond N={N}: {bad}")
    return BinomialRatio(ring, full, full.exact_part(), full.bterms(), tail)


#: k (k^2 - 3n + 2)(2k^2 - n) as {(power of k, power of n): coefficient}
MULTIPLIER = {(5, 0): Fraction(2), (3, 1): Fraction(-7), (1, 2): Fraction(3), (3, 0): Fraction(4), (1, 1): Fraction(-2)}


# ------------------------------------------------------------ error chains
def prune_tail_bounds(cfg: CaseConfig = CaseConfig()) -> tuple[BoundExpr, BoundExpr]:
    """Bounds for the parts ``k > n/2`` and ``n^alpha <= k <= n/2`` of the normalized sum.

    Writing each factor of the binomial ratio as ``exp(-2 artanh((j-1/2)/(n+1/2)))``
    gives ``ratio(k) <= exp(-k^2/(n+1/2))``, hence ``<= 2 e^(-k^2/n)`` for ``k <= n/2``
    and ``<= 2 e^(-n/4)`` for ``k > n/2``.  For ``k^2 >= 3n`` both factors
    ``k^2-3n+2`` and ``2k^2-n`` are positive with product ``<= 2k^4``, and
    ``sigma(k) <= A k log log n``.
    """
    N, A = cfg.N, cfg.A
    # sum_{n/2<k<=n} k^6 <= ((n+1)^7 - (n/2)^7)/7 <= n^7/4 once (1+1/N)^7 <= 7/4 + 1/128
    if (1 + Fraction(1, N)) ** 7 > Fraction(7, 4) + Fraction(1, 128):
        raise BoundError("sum_{n/2<k<=n} k^6 <= n^7/4 fails at N")
    if not _pow_geq(N, 2 * cfg.alpha_split - 1, Fraction(3)):
        raise BoundError("k^2 >= 3n fails on the middle range")
    large = BoundExpr(A, 7, Fraction(-1, 4), 1, 1, "large_k")
    mid_sum = gaussian_sum_bound(6, cfg.alpha_split, N).scale(4 * A, 0, 1)
    g = 2 * cfg.alpha_split - 1
    mid = mid_sum.collapse(Fraction(9, 2), N, -1, g, 1, "mid_k")
    return large, mid


def _poly_majorant_check() -> None:
    # |(k^2-3n+2)(2k^2-n)| <= 2k^4 + 3n^2: the product equals
    # 2k^4 - 7nk^2 + 4k^2 + 3n^2 - 2n, and 4k^4 - 7nk^2 + 6n^2 >= (6 - 49/16) n^2 >= 2n.
    assert Fraction(6) - Fraction(49, 16) >= 2


def sb_error_bound(cfg: CaseConfig, S_B: Sequence[BTerm]) -> BoundExpr:
    """Bound for the error made by replacing the ratio with ``S`` on ``k < n^alpha``.

    Each majorant monomial ``c k^i n^q`` contributes
    ``A c n^q loglog n sum_k k^(i+2) (2k^4 + 3n^2) e^(-k^2/n)``.
    """
    _poly_majorant_check()
    N, A = cfg.N, cfg.A
    if cfg.alpha_split > cfg.beta:
        raise BoundError("expansion is not valid on the whole range k < n^alpha")
    total = BoundSum()
    for b in S_B:
        if b.valid_from > N:
            raise BoundError(f"B-term valid only from {b.valid_from}")
        for i, c in b.majorant.items():
            total = total + gaussian_sum_bound(i + 6).scale(2 * A * c, b.q, 1)
            total = total + gaussian_sum_bound(i + 2).scale(3 * A * c, b.q + 2, 1)
    if not total:
        return BoundExpr(Fraction(0), Fraction(1, 2), m=1, label="S_B")
    return total.collapse(Fraction(1, 2), N, 0, 1, 1, "S_B")


def c1_bound(monomials: Iterable[tuple[int, Fraction, Fraction]], N: int) -> Fraction:
    """``c1 >= |S(n,k)|`` for ``k <= n^(3/4)``, ``n >= N``, monomial by monomial.

    ``|c k^i n^q| <= |c| n^(q + 3i/4) <= |c| N^(q + 3i/4)`` needs every
    ``q + 3i/4 <= 0``.
    """
    total = Fraction(0)
    for i, c, q in monomials:
        g = q + Fraction(3 * i, 4)
        if g > 0:
            raise BoundError(f"monomial k^{i} n^{q} grows on k <= n^(3/4)")
        total += abs(c) * power_upper(N, g, 30) if g else abs(c)
    return ceil_sig(total, 4)


def completion_bounds(cfg: CaseConfig, expansion: BinomialRatio) -> tuple[BoundExpr, BoundExpr, Fraction]:
    """Bounds for the terms added back when the sum over ``k < n^alpha`` is completed.

    On ``n^alpha <= k < n^(3/4)``: ``|S| <= c1``, ``sigma(k) <= A k loglog n``.
    On ``k >= n^(3/4)``: ``|S| <= c1 k^20 / n^15`` (each monomial has degree at most 20
    and ``n^(q+15) k^(i-20) <= n^(q + 3i/4)``) and ``sigma(k) <= k^2``.
    Returns the two bounds and ``c1``.
    """
    N, A = cfg.N, cfg.A
    mons = expansion.monomials()
    if max(i for i, _, _ in mons) > 20:
        raise BoundError("S has degree above 20 in k")
    c1 = c1_bound(mons, N)
    g = 2 * cfg.alpha_split - 1
    mid = gaussian_sum_bound(6, cfg.alpha_split, N).scale(2 * A * c1, 0, 1)
    mid_b = mid.collapse(Fraction(19, 4), N, -1, g, 1, "completion_mid")
    far = gaussian_sum_bound(27, Fraction(3, 4), N).scale(2 * c1, -15, 0)
    far_b = far.collapse(Fraction(11, 2), N, -1, Fraction(1, 2), 0, "completion_far")
    return mid_b, far_b, c1


# ----------------------------------------------------------------- assembly
def combine_errors(bounds: Sequence[BoundExpr], mellin_C, N: int) -> tuple[Fraction, list[BoundExpr]]:
    """Total ``C`` with ``sum(bounds) + mellin_C n^(3/4) <= C n^(3/4)`` for ``n >= N``."""
    collapsed = []
    for b in bounds:
        try:
            collapsed.append(b.collapse(Fraction(3, 4), N, 0, 1, 0))
        except BoundError as exc:
            raise BoundError(f"{b.label or b.describe()}: {exc}") from exc
    total = Fraction(mellin_C) + sum((c.C for c in collapsed), Fraction(0))
    return ceil_sig(total, SIG), collapsed


@dataclass
class TheoremReport:
    N: int
    main_term: dict[str, str]
    main_term_failures: list[str]
    bounds: list[BoundExpr]
    collapsed: list[BoundExpr]
    mellin_C: Fraction
    C_total: Fraction
    ratio: float
    c1: Fraction
    envelope: tuple[float, float]
    value_at_N: tuple[float, float]
    extra: dict = field(default_factory=dict)

    @property
    def envelope_ok(self) -> bool:
        return self.envelope[0] <= self.value_at_N[0] and self.value_at_N[1] <= self.envelope[1]

    @property
    def ok(self) -> bool:
        return self.ratio < 1 and not self.main_term_failures and self.envelope_ok

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "main_term": self.main_term,
            "main_term_failures": self.main_term_failures,
            "bounds": [b.to_json() for b in self.bounds],
            "collapsed": [b.to_json() for b in self.collapsed],
            "mellin_C": str(self.mellin_C),
            "C_total": str(self.C_total),
            "C_total_decimal": float(self.C_total),
            "ratio_at_N": self.ratio,
            "c1": str(self.c1),
            "envelope_at_N": list(self.envelope),
            "value_at_N": list(self.value_at_N),
            "ok": self.ok,
            **self.extra,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _mellin_summands(expansion: BinomialRatio):
    from ..mellin import extract_summands

    return extract_summands(expansion.exact, MULTIPLIER)


def main_theorem(cfg: CaseConfig = CaseConfig(), mellin=None, threads: int | None = None, nodes: int = 128) -> TheoremReport:
    """Assemble ``F(n)/binom(2n,n) = -n^2/8 + n/24 + B(C n^(3/4))`` for ``n >= N``.

    ``mellin`` may be a precomputed :class:`~rigasym.mellin.IntegralBound` for the
    same summands; otherwise the shifted integrals are bounded here.
    """
    from ..mellin import main_term_residues, shifted_integral_bound

    N = cfg.N
    robin_constant(N, cfg.A)
    exp = binomial_ratio_expansion(cfg)
    large, mid = prune_tail_bounds(cfg)
    sb = sb_error_bound(cfg, exp.bterms)
    comp_mid, comp_far, c1 = completion_bounds(cfg, exp)
    summands = _mellin_summands(exp)
    main = main_term_residues(summands, nodes=nodes)
    expected = {2: Fraction(-1, 8), 1: Fraction(1, 24)}
    failures = main.failures(expected)
    if mellin is None:
        mellin = shifted_integral_bound(summands, N=N, threads=threads)
    bounds = [large, mid, sb, comp_mid, comp_far]
    C_total, collapsed = combine_errors(bounds, mellin.C, N)
    lead = Fraction(N * N, 8) - Fraction(N, 24)
    radius = Interval(C_total) * _npow(N, Fraction(3, 4))
    ratio = float((radius / Interval(lead)).hi)
    env = (-lead - radius).lo, (-lead + radius).hi
    val = normalized_F_enclosure(N)
    main_json = {}
    for loc in sorted(main.table, reverse=True):
        coeff, _ = main.coefficient(loc)
        main_json[str(loc)] = f"[{float(coeff.lo):.12g}, {float(coeff.hi):.12g}]"
    return TheoremReport(
        N=N,
        main_term=main_json,
        main_term_failures=failures,
        bounds=bounds,
        collapsed=collapsed,
        mellin_C=mellin.C,
        C_total=C_total,
        ratio=ratio,
        c1=c1,
        envelope=(float(env[0]), float(env[1])),
        value_at_N=val,
        extra={"summands": len(summands)},
    )
