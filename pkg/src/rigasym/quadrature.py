"""Verified quadrature on vertical segments and analytic tails beyond them."""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple

import gmpy2
from gmpy2 import mpfr

from .interval import DN, PI, UP, Interval
from .special import zeta_enclosure

__all__ = [
    "AffineMap",
    "QuadratureResult",
    "line_segment_enclosure",
    "vertical_tail_bound",
    "zeta_line_bound",
    "gamma_line_bound",
    "PowerExpBound",
    "MidpointIntegrand",
]


class AffineMap(NamedTuple):
    """``s -> slope*s + shift`` with rational coefficients."""

    slope: Fraction
    shift: Fraction

    def real_at(self, c) -> Fraction:
        return Fraction(self.slope) * Fraction(c) + Fraction(self.shift)

    def __call__(self, s):
        return s * self.slope + self.shift


@dataclass
class QuadratureResult:
    enclosure: Interval
    width: float
    pieces: int
    flagged: bool
    tree: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "lo": str(self.enclosure.lo),
            "hi": str(self.enclosure.hi),
            "width": self.width,
            "pieces": self.pieces,
            "flagged": self.flagged,
            "tree": self.tree,
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)


class MidpointIntegrand:
    """Real integrand with a second-derivative extension.

    Each piece is enclosed by the midpoint rule plus its exact error term
    ``h^3/24 * f''(xi)``, so total widths shrink like ``h^2``.
    """

    def __init__(self, f: Callable[[Interval], Interval], d2f: Callable[[Interval], Interval]):
        self.f = f
        self.d2f = d2f

    def __call__(self, w: Interval) -> Interval:
        return self.f(w)

    def integrate(self, lo: Fraction, hi: Fraction) -> Interval:
        h = hi - lo
        return self.f(Interval((lo + hi) / 2)) * Interval(h) + self.d2f(Interval(lo, hi)) * Interval(h**3 / 24)


def _piece_enclosure(f, lo: Fraction, hi: Fraction) -> Interval:
    integrate = getattr(f, "integrate", None)
    if integrate is not None:
        return integrate(lo, hi)
    return f(Interval(lo, hi)) * Interval(hi - lo)


def line_segment_enclosure(
    f: Callable[[Interval], Interval],
    c,
    w_lo,
    w_hi,
    tol,
    max_pieces: int = 20000,
    record_tree: bool = False,
) -> QuadratureResult:
    """Enclose ``int_{w_lo}^{w_hi} f(w) dw`` along the line ``Re s = c``.

    ``f`` maps a box of ``w`` values to an enclosure of the integrand on that
    box.  If it also has ``integrate(lo, hi)``, that is used for each piece
    instead of ``f(box) * width``, which lets integrands supply higher-order
    enclosures.  Pieces with the widest enclosures are bisected until the sum
    has width at most ``tol`` or ``max_pieces`` is reached (then ``flagged``).
    The abscissa ``c`` is informational; ``f`` already knows its line.
    """
    w_lo, w_hi, tol = Fraction(w_lo), Fraction(w_hi), Fraction(tol)
    if not w_lo < w_hi:
        raise ValueError("need w_lo < w_hi")
    del c
    first = _piece_enclosure(f, w_lo, w_hi)
    # widths stay in mpfr: far-out pieces can exceed the double range
    heap = [(DN.minus(first.width()), w_lo, w_hi, first)]
    tree = [[str(w_lo), str(w_hi)]] if record_tree else []
    tol_m = mpfr(tol.numerator) / tol.denominator
    running = DN.minus(heap[0][0])
    while len(heap) < max_pieces:
        if running <= tol_m:
            # the running sum drifts under subtraction; confirm with a fresh one
            running = mpfr(0)
            for item in heap:
                running = UP.sub(running, item[0])
            if running <= tol_m:
                break
        negw, lo, hi, enc = heapq.heappop(heap)
        mid = (lo + hi) / 2
        left = _piece_enclosure(f, lo, mid)
        right = _piece_enclosure(f, mid, hi)
        heapq.heappush(heap, (DN.minus(left.width()), lo, mid, left))
        heapq.heappush(heap, (DN.minus(right.width()), mid, hi, right))
        running = UP.add(UP.add(running, left.width()), right.width())
        running = UP.add(running, negw)
        if not gmpy2.is_finite(running) or running < DN.minus(negw):
            # the removed piece dominated (or was unbounded): cancellation
            # would leave a huge rounding residue, so sum the widths afresh
            running = mpfr(0)
            for item in heap:
                running = UP.sub(running, item[0])
        if record_tree:
            tree.append([str(lo), str(mid), str(hi)])
    # sum in position order so the result does not depend on the refinement history
    pieces = sorted(heap, key=lambda item: item[1])
    total = Interval(0)
    for _, _, _, enc in pieces:
        total = total + enc
    width = float(total.width())
    return QuadratureResult(total, width, len(pieces), total.width() > tol_m, tree)


# ------------------------------------------------------------------ tail bounds
@dataclass(frozen=True)
class PowerExpBound:
    """Majorant ``K * |w|^P * exp(-lam*|w|)`` valid for ``|w| >= W``."""

    K: Interval
    P: Fraction
    lam: Interval

    def __mul__(self, other: "PowerExpBound") -> "PowerExpBound":
        return PowerExpBound(self.K * other.K, self.P + other.P, self.lam + other.lam)

    def value(self, w) -> Interval:
        w = Interval.coerce(w)
        return self.K * (w.log() * Interval(self.P) - self.lam * w).exp()

    def tail_integral(self, W) -> Interval:
        """Upper bound of ``int_W^inf`` via concavity of ``P log w``."""
        W = Interval.coerce(W)
        rate = self.lam - Interval(max(self.P, Fraction(0))) / W
        if rate.lo <= 0:
            raise ValueError(f"tail integral diverges: exponential rate does not beat |w|^{self.P} at W")
        return self.value(W) / rate


_SQRT_2PI = (PI * 2).sqrt()
_HALF_PI = PI * Interval(Fraction(1, 2))


def _gamma_power_bound(X: Fraction, slope: Fraction, W: Fraction) -> PowerExpBound:
    """``|Gamma(X + i*slope*w)| <= K |w|^(X-1/2) e^(-pi*slope*|w|/2)`` for ``|w| >= W``.

    Stirling with one term gives ``|Gamma(z)| <= sqrt(2 pi) |z|^(X-1/2) e^(-pi|Y|/2) e^(1/(6|z|))``
    for ``X > 0``; for ``X <= 0`` shift right by ``m`` and use ``|z + j| >= |Y|``.
    """
    Y0 = Interval(slope * W)
    Xs = X
    while Xs <= 0:
        Xs += 1
    e = Xs - Fraction(1, 2)
    K = _SQRT_2PI * (Interval(1) / (Y0 * 6)).exp()
    if e > 0:
        corr = Interval(1) + Interval(Xs) ** 2 / Y0.sqr()
        K = K * (corr.log() * Interval(e / 2)).exp()
    K = K * (Interval(slope).log() * Interval(X - Fraction(1, 2))).exp()
    return PowerExpBound(K, X - Fraction(1, 2), _HALF_PI * Interval(slope))


def gamma_line_bound(X, slope, W) -> PowerExpBound:
    return _gamma_power_bound(Fraction(X), Fraction(slope), Fraction(W))


def _zeta_real_upper(x: Fraction) -> Interval:
    return Interval(zeta_enclosure(x).re.hi)


HIARY_PATEL = Fraction(618, 1000)


def zeta_line_bound(x, slope, W) -> PowerExpBound:
    """Majorant of ``|zeta(x + i*slope*w)|`` for ``|w| >= W`` (``slope*W >= 100``).

    Supported abscissae: ``x >= 3/2``, ``x = 1``, ``x = 1/2`` and ``x <= -1/2``.
    """
    x, slope, W = Fraction(x), Fraction(slope), Fraction(W)
    t0 = slope * W
    if t0 < 100:
        raise ValueError("vertical bounds need |Im| >= 100")
    zero = Interval(0)
    if x >= Fraction(3, 2):
        return PowerExpBound(_zeta_real_upper(x), Fraction(0), zero)
    if x == 1:
        # |zeta(1+it)| <= log t + 1.53, and (log t + 1.53)/sqrt t decreases
        T = Interval(t0)
        K = (T.log() + Interval(Fraction(153, 100))) / T.sqrt()
        return PowerExpBound(K * Interval(slope).sqrt(), Fraction(1, 2), zero)
    if x == Fraction(1, 2):
        return PowerExpBound(Interval(HIARY_PATEL) * Interval(slope).sqrt(), Fraction(1, 2), zero)
    if x <= Fraction(-1, 2):
        # functional equation; |sin(pi s/2)| e^(-pi t/2) <= 1 cancels the Gamma decay
        X = 1 - x
        g = _gamma_power_bound(X, slope, W)
        K = (Interval(2).log() * Interval(x) + PI.log() * Interval(x - 1)).exp()
        K = K * _zeta_real_upper(X) * g.K
        return PowerExpBound(K, g.P, zero)
    raise ValueError(
        f"unsupported zeta abscissa {x}: no vertical bound on (-1/2, 1/2) or (1/2, 3/2) except 1/2 and 1"
    )


def vertical_tail_bound(c, W, zeta_args, gamma_arg) -> Fraction:
    """Rational ``C`` with ``int_{|w|>W} |zeta(z1) zeta(z2) Gamma(g)| dw <= C`` on ``Re s = c``.

    ``zeta_args`` is a pair of affine maps (entries may be ``None`` to drop a
    factor); ``gamma_arg`` is an affine map and supplies the exponential decay.
    """
    c, W = Fraction(c), Fraction(W)
    if W < 100:
        raise ValueError("tail bounds are stated for W >= 100")
    if gamma_arg is None:
        raise ValueError("a Gamma factor is needed for the tail to converge")
    gamma_arg = AffineMap(*gamma_arg)
    bound = _gamma_power_bound(gamma_arg.real_at(c), Fraction(gamma_arg.slope), W)
    for z in zeta_args or ():
        if z is None:
            continue
        z = AffineMap(*z)
        bound = bound * zeta_line_bound(z.real_at(c), z.slope, W)
    total = bound.tail_integral(Interval(W)) * 2
    return total.upper_fraction()
