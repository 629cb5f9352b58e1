"""Mellin analysis of sums ``sum_k d k^a n^b sigma(k) exp(-k^2/n)``.

Each summand has the transform ``zeta(2s-2b-a-1) zeta(2s-2b-a) Gamma(s-b)``.
Residues are enclosed by trapezoidal quadrature on circles around the poles
with a certified aliasing bound, and the remainder after shifting the line
of integration is bounded by certified quadrature plus analytic tails.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import mpmath
from gmpy2 import mpfr

from .interval import DN, PI, UP, ComplexInterval, Interval, IntervalError, log_int
from .quadrature import AffineMap, line_segment_enclosure, vertical_tail_bound
from .special import (
    digamma_enclosure,
    gamma_enclosure,
    log_abs_gamma,
    logzeta_curvature_bound,
    trigamma_enclosure,
    zeta_enclosure,
    zeta_with_derivative,
)

__all__ = [
    "MellinSummand",
    "TransformParams",
    "PoleSpec",
    "ResidueEnclosure",
    "MainTerm",
    "SummandBound",
    "IntegralBound",
    "extract_summands",
    "transform_params",
    "poles_in_halfplane",
    "residue_enclosure",
    "main_term_residues",
    "choose_abscissa",
    "central_integral",
    "bound_summand",
    "shifted_integral_bound",
]

HALF = Fraction(1, 2)
THREE_QUARTERS = Fraction(3, 4)


@dataclass(frozen=True, order=True)
class MellinSummand:
    a: int
    b: int
    d: Fraction

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("the power of k must be non-negative")
        object.__setattr__(self, "d", Fraction(self.d))

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "d": str(self.d)}


@dataclass(frozen=True)
class TransformParams:
    zeta1: AffineMap
    zeta2: AffineMap
    gamma: AffineMap

    def __call__(self, s) -> ComplexInterval:
        s = ComplexInterval.coerce(s)
        return zeta_enclosure(self.zeta1(s)) * zeta_enclosure(self.zeta2(s)) * gamma_enclosure(self.gamma(s))


def transform_params(m: MellinSummand) -> TransformParams:
    base = -2 * m.b - m.a
    return TransformParams(
        AffineMap(Fraction(2), Fraction(base - 1)),
        AffineMap(Fraction(2), Fraction(base)),
        AffineMap(Fraction(1), Fraction(-m.b)),
    )


@dataclass(frozen=True, order=True)
class PoleSpec:
    location: Fraction
    order: int
    sources: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"location": str(self.location), "order": self.order, "sources": list(self.sources)}


# ------------------------------------------------------------------ summands
def _terms_of(x) -> list[tuple[int, Fraction, Fraction]]:
    """``(k power, n power, coeff)`` triples of an expansion, mapping or number."""
    if isinstance(x, Mapping):
        return [(int(i), Fraction(j), Fraction(c)) for (i, j), c in x.items() if c]
    exact_terms = getattr(x, "exact_terms", None)
    if exact_terms is not None:
        if x.bterms() or x.oterm() is not None:
            raise ValueError("strip error terms before extracting summands")
        return [(deg, Fraction(t.q), c) for t in exact_terms() for deg, c in t.coeff.items() if c]
    c = Fraction(x)
    return [(0, Fraction(0), c)] if c else []


def extract_summands(exact_part, multiplier) -> list[MellinSummand]:
    """Expand ``exact_part * multiplier`` into summands ``(a, b, d)``.

    Both factors may be ring expansions without error terms, mappings
    ``{(k power, n power): coeff}``, or plain numbers.
    """
    acc: dict[tuple[int, int], Fraction] = {}
    for i1, q1, c1 in _terms_of(exact_part):
        for i2, q2, c2 in _terms_of(multiplier):
            q = q1 + q2
            if q.denominator != 1:
                raise ValueError(f"non-integral power of n: {q}")
            key = (i1 + i2, int(q))
            acc[key] = acc.get(key, Fraction(0)) + c1 * c2
    return [MellinSummand(a, b, d) for (a, b), d in sorted(acc.items()) if d]


# ------------------------------------------------------------------ poles
def _zeta_is_zero(arg: Fraction) -> bool:
    return arg.denominator == 1 and arg < 0 and arg % 2 == 0


def poles_in_halfplane(m: MellinSummand, sigma_min, include_removable: bool = False) -> list[PoleSpec]:
    """Poles of the transform with real part at least ``sigma_min``.

    Orders are net of the trivial zeros of the zeta factors, which cancel
    every Gamma pole when ``a >= 1``; such removable points are reported
    (with order 0) only on request.
    """
    sigma_min = Fraction(sigma_min)
    tp = transform_params(m)
    cands: dict[Fraction, list[str]] = {}
    for name, z in (("zeta1", tp.zeta1), ("zeta2", tp.zeta2)):
        loc = (1 - z.shift) / z.slope
        if loc >= sigma_min:
            cands.setdefault(loc, []).append(name)
    g = Fraction(m.b)
    while g >= sigma_min:
        cands.setdefault(g, []).append("gamma")
        g -= 1
    out = []
    for loc, sources in sorted(cands.items(), reverse=True):
        zeros = sum(1 for z in (tp.zeta1, tp.zeta2) if _zeta_is_zero(z.real_at(loc)))
        order = len(sources) - zeros
        if order > 2:
            raise NotImplementedError("poles of order above 2")
        if order > 0 or include_removable:
            out.append(PoleSpec(loc, max(order, 0), tuple(sources)))
    return out


# ------------------------------------------------------------------ residues
RESIDUE_RADIUS = Fraction(1, 4)
BOUND_RADIUS = Fraction(9, 20)


@dataclass
class ResidueEnclosure:
    """Coefficients of ``n^s0`` and ``n^s0 log n`` in the residue of ``g*(s) n^s``."""

    location: Fraction
    coeff: Interval
    log_coeff: Interval
    flagged: bool = False

    def to_json(self) -> dict:
        return {
            "location": str(self.location),
            "coeff": [str(self.coeff.lo), str(self.coeff.hi)],
            "log_coeff": [str(self.log_coeff.lo), str(self.log_coeff.hi)],
            "flagged": self.flagged,
        }


@lru_cache(maxsize=None)
def _unit_roots(M: int) -> tuple[ComplexInterval, ...]:
    out = []
    for j in range(M):
        th = PI * Interval(Fraction(2 * j, M))
        out.append(ComplexInterval(th.cos(), th.sin()))
    return tuple(out)


def _circle_point(center: Fraction, radius: Fraction, M: int, j: int) -> ComplexInterval:
    return _unit_roots(M)[j] * Interval(radius) + center


def _circle_box(center: Fraction, radius: Fraction, K: int, j: int) -> ComplexInterval:
    # square of half-side radius*pi/K around the arc midpoint covers the arc
    th = PI * Interval(Fraction(2 * j + 1, K))
    mid = ComplexInterval(th.cos(), th.sin()) * Interval(radius) + center
    h = (PI * Interval(Fraction(radius) / K)).hi
    pad = Interval._raw(DN.minus(h), h)
    return ComplexInterval(mid.re + pad, mid.im + pad)


@lru_cache(maxsize=None)
def _zeta_on_circle(center: Fraction, radius: Fraction, M: int, j: int, box: bool) -> ComplexInterval:
    pt = (_circle_box if box else _circle_point)(center, radius, M, j)
    return zeta_enclosure(pt)


@lru_cache(maxsize=None)
def _gamma_on_circle(center: Fraction, radius: Fraction, M: int, j: int, box: bool) -> ComplexInterval:
    pt = (_circle_box if box else _circle_point)(center, radius, M, j)
    return gamma_enclosure(pt)


def _transform_on_circle(tp: TransformParams, s0: Fraction, radius: Fraction, M: int, j: int, box: bool):
    # the zeta arguments have slope 2, so their circles have twice the radius
    z1 = _zeta_on_circle(tp.zeta1.real_at(s0), 2 * radius, M, j, box)
    z2 = _zeta_on_circle(tp.zeta2.real_at(s0), 2 * radius, M, j, box)
    g = _gamma_on_circle(tp.gamma.real_at(s0), radius, M, j, box)
    return z1 * z2 * g


def residue_enclosure(m: MellinSummand, p: PoleSpec, nodes: int = 128, bound_boxes: int = 64) -> ResidueEnclosure:
    """Certified residue of ``d * g*(s) * n^s`` at ``p.location``.

    The trapezoidal rule with ``nodes`` points on ``|s - s0| = 1/4`` picks up
    the Laurent coefficients ``c_-1`` and ``c_-2`` exactly, up to aliasing
    from ``c_k``, ``k >= nodes - 2``, which Cauchy's inequality on the circle
    of radius 9/20 bounds by ``B R^(j+1) q / (1 - q)`` with ``q = (1/4 / (9/20))^nodes``.
    """
    if p.order > 2:
        raise NotImplementedError("poles of order above 2")
    tp = transform_params(m)
    s0, rho, R = Fraction(p.location), RESIDUE_RADIUS, BOUND_RADIUS
    roots = _unit_roots(nodes)
    c1 = ComplexInterval(0)
    c2 = ComplexInterval(0)
    for j in range(nodes):
        e = roots[j] * Interval(rho)
        v = _transform_on_circle(tp, s0, rho, nodes, j, False) * e
        c1 = c1 + v
        c2 = c2 + v * e
    inv = Interval(Fraction(1, nodes))
    c1 = c1 * inv
    c2 = c2 * inv
    B = max((abs(_transform_on_circle(tp, s0, R, bound_boxes, j, True)).hi for j in range(bound_boxes)))
    q = (Interval(rho) / Interval(R)) ** nodes
    alias = Interval(B) * q / (Interval(1) - q)
    d = Interval(m.d)
    out = []
    for c, jpow in ((c1, 1), (c2, 2)):
        err = (alias * Interval(R) ** jpow).hi
        pad = Interval._raw(DN.minus(err), err)
        # the residue of a real-on-the-axis function at a real point is real
        out.append((c.re + pad) * d)
    flagged = any(float(x.width()) > 1e-12 for x in out)
    return ResidueEnclosure(s0, out[0], out[1], flagged)


@dataclass
class MainTerm:
    """Aggregated residue coefficients, keyed by the power of ``n``."""

    table: dict[Fraction, ResidueEnclosure]

    def coefficient(self, power) -> tuple[Interval, Interval]:
        r = self.table.get(Fraction(power))
        if r is None:
            return Interval(0), Interval(0)
        return r.coeff, r.log_coeff

    def failures(self, expected: Mapping, tol=Fraction(1, 10**9)) -> list[str]:
        """Poles whose coefficients are not within ``tol`` of ``expected`` (others expected 0)."""
        expected = {Fraction(k): Fraction(v) for k, v in expected.items()}
        tol = Fraction(tol)
        bad = []
        for loc in sorted(set(self.table) | set(expected), reverse=True):
            coeff, log_coeff = self.coefficient(loc)
            target = expected.get(loc, Fraction(0))
            if not (coeff.lower_fraction() >= target - tol and coeff.upper_fraction() <= target + tol):
                bad.append(f"n^{loc}: {coeff!r} not within {float(tol)} of {target}")
            if not (log_coeff.lower_fraction() >= -tol and log_coeff.upper_fraction() <= tol):
                bad.append(f"n^{loc} log n: {log_coeff!r} not within {float(tol)} of 0")
        return bad

    def to_json(self) -> list:
        return [self.table[k].to_json() for k in sorted(self.table, reverse=True)]


def main_term_residues(summands: Iterable[MellinSummand], sigma_min=THREE_QUARTERS, nodes: int = 128) -> MainTerm:
    table: dict[Fraction, ResidueEnclosure] = {}
    for m in summands:
        for p in poles_in_halfplane(m, sigma_min):
            r = residue_enclosure(m, p, nodes)
            cur = table.get(p.location)
            if cur is None:
                table[p.location] = r
            else:
                cur.coeff = cur.coeff + r.coeff
                cur.log_coeff = cur.log_coeff + r.log_coeff
                cur.flagged = cur.flagged or r.flagged
    return MainTerm(table)


# ------------------------------------------------------------------ abscissae
C_FLOOR = Fraction(-8)
_ESTIMATE_STEP = Fraction(1, 2)
_ESTIMATE_RANGE = 60


def _supported_zeta_abscissa(x: Fraction) -> bool:
    # away from the critical line, where zeta has no zeros and log|zeta| is smooth
    return x >= Fraction(3, 2) or x <= -HALF


def _admissible_abscissae(m: MellinSummand, top=THREE_QUARTERS, floor=C_FLOOR) -> list[Fraction]:
    blocking = [p.location for p in poles_in_halfplane(m, floor) if p.location < top]
    lowest = max(blocking) if blocking else None
    tp = transform_params(m)
    out = []
    c = Fraction(top)
    while c >= floor and (lowest is None or c > lowest):
        if all(_supported_zeta_abscissa(z.real_at(c)) for z in (tp.zeta1, tp.zeta2)):
            out.append(c)
        c -= HALF
    return out


@lru_cache(maxsize=None)
def _estimate_table(kind: str, x: Fraction) -> tuple[float, ...]:
    """Float values of ``|zeta(x + 2iw)|`` or ``|Gamma(x + iw)|`` on the estimate grid."""
    with mpmath.workdps(15):
        ws = [float(_ESTIMATE_STEP * i) for i in range(int(_ESTIMATE_RANGE / _ESTIMATE_STEP) + 1)]
        if kind == "zeta":
            return tuple(float(abs(mpmath.zeta(mpmath.mpc(float(x), 2 * w)))) for w in ws)
        return tuple(float(mpmath.exp(mpmath.re(mpmath.loggamma(mpmath.mpc(float(x), w))))) for w in ws)


def _estimate_integral(m: MellinSummand, c: Fraction) -> float:
    """Trapezoidal estimate of ``int_R |g*(c + iw)| dw`` (not certified)."""
    tp = transform_params(m)
    z1 = _estimate_table("zeta", tp.zeta1.real_at(c))
    z2 = _estimate_table("zeta", tp.zeta2.real_at(c))
    g = _estimate_table("gamma", tp.gamma.real_at(c))
    vals = [p * q * r for p, q, r in zip(z1, z2, g)]
    h = float(_ESTIMATE_STEP)
    return 2 * h * (sum(vals) - vals[0] / 2 - vals[-1] / 2)


def choose_abscissa(m: MellinSummand, N: int = 10000) -> tuple[Fraction, float]:
    """Admissible abscissa minimising the estimated contribution ``N^(c-3/4) int |g*|``.

    Admissible: on the grid ``3/4 - j/2``, no uncollected pole in
    ``[c, 3/4]``, and both zeta factors off the critical strip.
    """
    cands = _admissible_abscissae(m)
    if not cands:
        raise ValueError(f"no admissible abscissa for (a, b) = ({m.a}, {m.b})")
    best = None
    for c in cands:
        est = _estimate_integral(m, c) * float(N) ** float(c - THREE_QUARTERS)
        if best is None or est < best[1]:
            best = (c, est)
    return best


# ------------------------------------------------------------------ central integral
# Per box [m - r, m + r] every factor G contributes log|G(m)|, the slope D of
# log|G| at m and an enclosure E of its second derivative on the box, so that
#   log|F(m+u)| in ell + D u + [min(E,0), max(E,0)] r^2/2.


@lru_cache(maxsize=None)
def _curvature_const(sigma: Fraction) -> Interval:
    L = logzeta_curvature_bound(sigma)
    return Interval(-4 * L, 4 * L)


_HALF_PI = PI * Interval(HALF)
_LOG2 = log_int(2)
_LOGPI = PI.log()


@lru_cache(maxsize=None)
def _zeta_point(x: Fraction, w: Fraction) -> tuple[Interval, Interval]:
    s = ComplexInterval(Interval(x), Interval(2 * w))
    if x >= Fraction(3, 2):
        z, dz = zeta_with_derivative(s)
        return z.abs2().log() * Interval(HALF), (dz / z).im * Interval(-2)
    u = 1 - s
    z, dz = zeta_with_derivative(u)
    sn = (s * _HALF_PI).sin()
    cot = (s * _HALF_PI).cos() / sn
    ell = (
        _LOG2 * Interval(x)
        + _LOGPI * Interval(x - 1)
        + sn.abs2().log() * Interval(HALF)
        + log_abs_gamma(u)
        + z.abs2().log() * Interval(HALF)
    )
    deriv = cot * _HALF_PI - digamma_enclosure(u) - dz / z
    return ell, deriv.im * Interval(-2)


@lru_cache(maxsize=None)
def _zeta_curvature(x: Fraction, lo: Fraction, hi: Fraction) -> Interval:
    if x >= Fraction(3, 2):
        return _curvature_const(x)
    s = ComplexInterval(Interval(x), Interval(2 * lo, 2 * hi))
    # |sin(pi s/2)|^2 = sin^2(pi x/2) + sinh^2(pi t/2) bounds csc^2 without wrapping
    floor = (_HALF_PI * Interval(x)).sin().sqr() + (PI * Interval(lo)).sinh().sqr()
    csc2 = floor.reciprocal().hi
    curv = -trigamma_enclosure(1 - s).re * Interval(4) + Interval._raw(DN.minus(csc2), csc2) * _HALF_PI.sqr() * Interval(4)
    return curv + _curvature_const(1 - x)


@lru_cache(maxsize=None)
def _gamma_point(y: Fraction, w: Fraction) -> tuple[Interval, Interval]:
    s = ComplexInterval(Interval(y), Interval(w))
    return log_abs_gamma(s), -digamma_enclosure(s).im


@lru_cache(maxsize=None)
def _gamma_curvature(y: Fraction, lo: Fraction, hi: Fraction) -> Interval:
    s = ComplexInterval(Interval(y), Interval(lo, hi))
    return -trigamma_enclosure(s).re


def _sinhc_mag(v) -> Interval:
    """``sinh(v)/v`` for a non-negative scalar ``v``."""
    if v < 1e-6:
        return Interval._raw(mpfr(1), UP.add(1, UP.mul(v, v)))
    x = Interval(v)
    return x.sinh() / x


class LineIntegrand:
    """``|zeta(x1 + 2iw) zeta(x2 + 2iw) Gamma(y + iw)|`` with second-order box integrals."""

    def __init__(self, zeta_abscissae: tuple[Fraction, ...], gamma_abscissa: Fraction):
        for x in zeta_abscissae:
            if not _supported_zeta_abscissa(x):
                raise ValueError(f"zeta abscissa {x} is not supported by the line bounds")
        self.xs = tuple(Fraction(x) for x in zeta_abscissae)
        self.y = Fraction(gamma_abscissa)

    def _pieces(self, mid: Fraction, lo: Fraction, hi: Fraction):
        ell, D = _gamma_point(self.y, mid)
        E = _gamma_curvature(self.y, lo, hi)
        for x in self.xs:
            e2, d2 = _zeta_point(x, mid)
            ell, D, E = ell + e2, D + d2, E + _zeta_curvature(x, lo, hi)
        return ell, D, E

    def integrate(self, lo: Fraction, hi: Fraction) -> Interval:
        mid, r = (lo + hi) / 2, (hi - lo) / 2
        ell, D, E = self._pieces(mid, lo, hi)
        rr = Interval(r)
        Dr = D * rr
        sh = Interval._raw(_sinhc_mag(Dr.mig()).lo, _sinhc_mag(Dr.mag()).hi)
        half_r2 = rr.sqr() * Interval(HALF)
        lo_exp = Interval._raw(min(E.lo, 0), min(E.lo, 0)) * half_r2
        hi_exp = Interval._raw(max(E.hi, 0), max(E.hi, 0)) * half_r2
        base = rr * Interval(2) * sh
        lower = (ell + lo_exp).exp() * base
        upper = (ell + hi_exp).exp() * base
        return Interval._raw(lower.lo, upper.hi)

    def __call__(self, box: Interval) -> Interval:
        raise NotImplementedError("use integrate(lo, hi)")


def central_integral(m: MellinSummand, c, W=100, rel_tol=Fraction(1, 100), estimate: float | None = None, max_pieces=4000):
    """Certified enclosure of ``int_{-W}^{W} |g*(c + iw)| dw`` (by symmetry, twice the half-line)."""
    c = Fraction(c)
    tp = transform_params(m)
    f = LineIntegrand((tp.zeta1.real_at(c), tp.zeta2.real_at(c)), tp.gamma.real_at(c))
    if estimate is None:
        estimate = _estimate_integral(m, c)
    tol = Fraction(max(estimate, 1e-300)) * Fraction(rel_tol) / 2
    res = line_segment_enclosure(f, c, 0, W, tol, max_pieces=max_pieces)
    return res.enclosure * Interval(2), res


@dataclass
class SummandBound:
    summand: MellinSummand
    c: Fraction
    central: Interval
    tail: Fraction
    contribution: Fraction
    pieces: int
    flagged: bool

    def to_json(self) -> dict:
        return {
            **self.summand.to_json(),
            "c": str(self.c),
            "central": [str(self.central.lo), str(self.central.hi)],
            "tail": str(self.tail),
            "contribution": str(self.contribution),
            "contribution_decimal": f"{float(self.contribution):.6g}",
            "pieces": self.pieces,
            "flagged": self.flagged,
        }


@dataclass
class IntegralBound:
    C: Fraction
    per_summand: list[SummandBound] = field(default_factory=list)
    W: Fraction = Fraction(100)
    N: int = 10000

    def to_json(self) -> dict:
        return {
            "C": str(self.C),
            "C_decimal": f"{float(self.C):.6f}",
            "W": str(self.W),
            "N": self.N,
            "summands": [b.to_json() for b in self.per_summand],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _round_up(x: Fraction, denom: int = 100) -> Fraction:
    return Fraction(-((-x.numerator * denom) // x.denominator), denom)


def bound_summand(m: MellinSummand, N: int = 10000, W=100, rel_tol=Fraction(1, 100)) -> SummandBound:
    c, est = choose_abscissa(m, N)
    tp = transform_params(m)
    central, res = central_integral(m, c, W, rel_tol, _estimate_integral(m, c))
    tail = vertical_tail_bound(c, W, (tp.zeta1, tp.zeta2), tp.gamma)
    npow = (log_int(N) * Interval(c - THREE_QUARTERS)).exp()
    total = Interval(abs(m.d)) * npow * (Interval(central.hi) + Interval(tail)) / (PI * Interval(2))
    return SummandBound(m, c, central, tail, total.upper_fraction(), res.pieces, res.flagged)


def _worker(args):
    m, N, W, rel_tol = args
    return bound_summand(m, N, W, rel_tol)


def shifted_integral_bound(
    summands: Iterable[MellinSummand], W=100, N: int = 10000, rel_tol=Fraction(1, 100), threads: int | None = None
) -> IntegralBound:
    """Constant ``C`` with remainder ``<= C n^(3/4)`` for ``n >= N``.

    For each summand the line is moved to its chosen abscissa ``c <= 3/4``,
    where ``n^c <= N^(c-3/4) n^(3/4)``; the central part ``|w| <= W`` is
    integrated with certified quadrature and the rest by analytic tails.
    """
    summands = list(summands)
    W = Fraction(W)
    if threads is None:
        threads = int(os.environ.get("RA_THREADS", "1") or 1)
    jobs = [(m, N, W, Fraction(rel_tol)) for m in summands]
    if threads > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as ex:
            bounds = list(ex.map(_worker, jobs))
    else:
        bounds = [_worker(j) for j in jobs]
    total = sum((b.contribution for b in bounds), Fraction(0))
    return IntegralBound(_round_up(total) if total else Fraction(0), bounds, W, N)
