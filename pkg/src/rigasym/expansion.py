"""Asymptotic expansions in ``n`` with a monomially bounded dependent variable ``k``.

Expansions are finite sums of

* exact terms ``c(k) * n^q`` with ``c`` a polynomial in ``k``,
* O-terms ``O(n^q)`` (always ``k``-free),
* B-terms ``B_{n >= v}(M(k) * n^q)``: an error bounded in absolute value by
  ``M(k) * n^q`` for all real ``n >= v`` and all ``n^alpha <= k <= n^beta``.

The ring is built once via :class:`AsymptoticRing`; expansions are immutable and
support ``+ - * / **``::

    >>> R = AsymptoticRing(0, Fraction(4, 7), round_digits=3, default_prec=5)
    >>> n, k = R.gens()
    >>> print(7*n + R.B(5/n, valid_from=10) + 3/n**2)
    7*n + B(53/10*n^(-1), n >= 10)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, NamedTuple, Union

import mpmath

from ._bounds import UpperSum, round_up_constant

Number = Union[int, Fraction]

__all__ = [
    "RingConfig",
    "KPolynomial",
    "GrowthRange",
    "ExactTerm",
    "OTerm",
    "BTerm",
    "Expansion",
    "AsymptoticRing",
    "growth_range",
    "can_absorb",
    "absorb_into_bterm",
    "round_up_constant",
    "simplify_expansion",
    "collapse_bterm_growth",
    "invert_leading_kfree",
    "exp_expansion",
    "AbsorptionError",
]


class AbsorptionError(ValueError):
    """A term cannot be absorbed into the requested B-term."""


@dataclass(frozen=True)
class RingConfig:
    alpha: Fraction
    beta: Fraction
    round_digits: int | None = None
    default_prec: int = 5

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if not 0 <= self.alpha < self.beta:
            raise ValueError(f"need 0 <= alpha < beta, got {self.alpha}, {self.beta}")
        if self.round_digits is not None and self.round_digits < 0:
            raise ValueError("round_digits must be non-negative")
        if self.default_prec < 1:
            raise ValueError("default_prec must be positive")

    def round(self, x: UpperSum | Number) -> Fraction:
        if not isinstance(x, UpperSum):
            x = UpperSum(x)
        return x.upper(self.round_digits)


# --------------------------------------------------------------------------
# polynomials in k


def _fmt_q(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_monomial(c: Fraction, d: int) -> str:
    kpart = "" if d == 0 else ("k" if d == 1 else f"k^{d}")
    if not kpart:
        return _fmt_q(c)
    if c == 1:
        return kpart
    if c == -1:
        return "-" + kpart
    return f"{_fmt_q(c)}*{kpart}"


def _join(parts: list[str]) -> str:
    out = ""
    for i, p in enumerate(parts):
        if i == 0:
            out = p
        elif p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


class KPolynomial:
    """Polynomial in ``k`` with rational coefficients; zero coefficients are never stored."""

    __slots__ = ("_items", "_hash")

    def __init__(self, coeffs: dict[int, Number] | Number | None = None):
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, dict):
            coeffs = {0: coeffs}
        items = []
        for d, c in coeffs.items():
            c = Fraction(c)
            if d < 0:
                raise ValueError("negative powers of k are not supported")
            if c:
                items.append((int(d), c))
        items.sort(reverse=True)
        self._items = tuple(items)
        self._hash = None

    @classmethod
    def k(cls, degree: int = 1, coeff: Number = 1) -> "KPolynomial":
        return cls({degree: coeff})

    def items(self):
        """(degree, coefficient) pairs, highest degree first."""
        return self._items

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self._items)

    def __bool__(self):
        return bool(self._items)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = KPolynomial(other)
        return isinstance(other, KPolynomial) and self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    @property
    def max_degree(self) -> int:
        return self._items[0][0] if self._items else 0

    @property
    def min_degree(self) -> int:
        return self._items[-1][0] if self._items else 0

    def is_constant(self) -> bool:
        return not self._items or (len(self._items) == 1 and self._items[0][0] == 0)

    def constant(self) -> Fraction:
        return self.as_dict().get(0, Fraction(0))

    def coeff(self, d: int) -> Fraction:
        return self.as_dict().get(d, Fraction(0))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = KPolynomial(other)
        out = self.as_dict()
        for d, c in other._items:
            out[d] = out.get(d, 0) + c
        return KPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return KPolynomial({d: -c for d, c in self._items})

    def __sub__(self, other):
        return self + (-other if isinstance(other, KPolynomial) else -Fraction(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return KPolynomial({d: c * other for d, c in self._items})
        out: dict[int, Fraction] = {}
        for d1, c1 in self._items:
            for d2, c2 in other._items:
                out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
        return KPolynomial(out)

    __rmul__ = __mul__

    def abs(self) -> "KPolynomial":
        """Coefficientwise absolute value; majorizes ``|p(k)|`` for ``k >= 0``."""
        return KPolynomial({d: abs(c) for d, c in self._items})

    def abs_sum(self) -> Fraction:
        return sum((abs(c) for _, c in self._items), Fraction(0))

    def __call__(self, k):
        return sum(c * k**d for d, c in self._items) if self._items else 0 * k

    def monomials(self) -> list["KPolynomial"]:
        return [KPolynomial({d: c}) for d, c in self._items]

    def __str__(self):
        if not self._items:
            return "0"
        return _join([_fmt_monomial(c, d) for d, c in self._items])

    def __repr__(self):
        return f"KPolynomial({str(self)!r})"

    def to_json(self) -> dict[str, str]:
        return {str(d): _fmt_q(c) for d, c in self._items}

    @classmethod
    def from_json(cls, data: dict[str, str]) -> "KPolynomial":
        return cls({int(d): Fraction(c) for d, c in data.items()})


# --------------------------------------------------------------------------
# terms


class GrowthRange(NamedTuple):
    lower: Fraction
    upper: Fraction


@dataclass(frozen=True)
class ExactTerm:
    coeff: KPolynomial
    q: Fraction


@dataclass(frozen=True)
class OTerm:
    q: Fraction


@dataclass(frozen=True)
class BTerm:
    majorant: KPolynomial
    q: Fraction
    valid_from: int

    def __post_init__(self):
        if any(c < 0 for _, c in self.majorant.items()):
            raise ValueError("B-term majorants need non-negative coefficients")
        if self.valid_from < 1:
            raise ValueError("valid_from must be a positive integer")


Term = Union[ExactTerm, OTerm, BTerm]


def _coeff(t: Term) -> KPolynomial:
    return t.majorant if isinstance(t, BTerm) else t.coeff


def growth_range(t: Term, cfg: RingConfig) -> GrowthRange:
    """Range of n-exponents the term attains for ``n^alpha <= k <= n^beta``."""
    if isinstance(t, OTerm):
        return GrowthRange(t.q, t.q)
    c = _coeff(t)
    return GrowthRange(t.q + cfg.alpha * c.min_degree, t.q + cfg.beta * c.max_degree)


def _is_zero(t: Term) -> bool:
    return not isinstance(t, OTerm) and not _coeff(t)


def can_absorb(b: BTerm, t: Term, cfg: RingConfig) -> bool:
    """Two-sided growth test: ``t`` is weaker than ``b`` at both ends of the k-range."""
    if _is_zero(t):
        return True
    if isinstance(t, OTerm):
        return False
    gb, gt = growth_range(b, cfg), growth_range(t, cfg)
    return gt.upper <= gb.upper and gt.lower <= gb.lower


def _route(b: BTerm, degree: int, p: Fraction, cfg: RingConfig):
    """Target degree and n-exponent for bounding ``k^degree n^p`` by ``k^e n^p'`` with ``p' <= b.q``."""
    top = b.majorant.max_degree
    if degree > top:
        e, pp = top, p + cfg.beta * (degree - top)
    else:
        e, pp = degree, p
    if pp > b.q:
        if cfg.alpha == 0:
            return None
        steps = -((-(pp - b.q)) // cfg.alpha)
        if e + steps > top:
            return None
        e, pp = e + int(steps), pp - cfg.alpha * int(steps)
    return e, pp


def _absorbable(b: BTerm, t: Term, cfg: RingConfig) -> bool:
    if not can_absorb(b, t, cfg):
        return False
    if _is_zero(t):
        return True
    return _route(b, _coeff(t).max_degree, t.q, cfg) is not None


def absorb_into_bterm(b: BTerm, t: Term, cfg: RingConfig) -> BTerm:
    """Absorb ``t`` into ``b``.

    ``|c(k)|`` is majorized by ``sum|c_i| * k^deg(c)``; surplus powers of ``k``
    are traded for ``n^beta``; the n-exponent is then lifted to ``b.q`` using
    ``n >= valid_from``; the touched majorant coefficient is rounded up.
    """
    if not can_absorb(b, t, cfg):
        raise AbsorptionError(f"{t} is not dominated by {b}")
    if _is_zero(t):
        return b
    c = _coeff(t)
    route = _route(b, c.max_degree, t.q, cfg)
    if route is None:
        raise AbsorptionError(f"no degree route absorbs {t} into {b}")
    e, pp = route
    v = max(b.valid_from, getattr(t, "valid_from", 1))
    acc = UpperSum(b.majorant.coeff(e)).add(c.abs_sum(), v, pp - b.q)
    new = b.majorant.as_dict()
    new[e] = cfg.round(acc)
    return BTerm(KPolynomial(new), b.q, v)


def _make_b(majorant: KPolynomial, q: Fraction, v: int, cfg: RingConfig) -> BTerm:
    return BTerm(KPolynomial({d: cfg.round(c) for d, c in majorant.abs().items()}), Fraction(q), v)


def _sort_key(t: Term, cfg: RingConfig):
    g = growth_range(t, cfg)
    rank = 0 if isinstance(t, ExactTerm) else (1 if isinstance(t, BTerm) else 2)
    return (-g.upper, -g.lower, rank, -t.q)


def _normalize(terms: Iterable[Term], cfg: RingConfig) -> tuple[Term, ...]:
    exact: dict[Fraction, KPolynomial] = {}
    bterms: dict[Fraction, BTerm] = {}
    oterm: OTerm | None = None
    for t in terms:
        if isinstance(t, ExactTerm):
            exact[t.q] = exact[t.q] + t.coeff if t.q in exact else t.coeff
        elif isinstance(t, OTerm):
            if oterm is None or t.q > oterm.q:
                oterm = t
        elif t.majorant:
            old = bterms.get(t.q)
            if old is None:
                bterms[t.q] = t
            else:
                bterms[t.q] = _make_b(old.majorant + t.majorant, t.q, max(old.valid_from, t.valid_from), cfg)
    rest: list[Term] = [ExactTerm(c, q) for q, c in exact.items() if c]
    rest += list(bterms.values())
    if oterm is not None:
        rest = [t for t in rest if growth_range(t, cfg).upper > oterm.q]
    rest = _absorb_greedy(rest, cfg)
    if oterm is not None:
        rest.append(oterm)
    rest.sort(key=lambda t: _sort_key(t, cfg))
    return tuple(rest)


def _pick_bterm(bs: list[BTerm], t: Term, cfg: RingConfig) -> int | None:
    best, best_key = None, None
    for i, b in enumerate(bs):
        if b is t or not _absorbable(b, t, cfg):
            continue
        g = growth_range(b, cfg)
        key = (g.upper, g.lower, i)
        if best_key is None or key < best_key:
            best, best_key = i, key
    return best


def _absorb_greedy(terms: list[Term], cfg: RingConfig) -> list[Term]:
    terms = sorted(terms, key=lambda t: _sort_key(t, cfg))
    while True:
        bs = [t for t in terms if isinstance(t, BTerm)]
        if not bs:
            return terms
        for t in terms:
            i = _pick_bterm(bs, t, cfg)
            if i is not None:
                b = bs[i]
                nb = absorb_into_bterm(b, t, cfg)
                terms = [x for x in terms if x is not t and x is not b] + [nb]
                terms.sort(key=lambda x: _sort_key(x, cfg))
                break
        else:
            return terms


# --------------------------------------------------------------------------
# rendering


def _fmt_npow(q: Fraction) -> str:
    if q == 0:
        return ""
    if q == 1:
        return "n"
    if q.denominator == 1 and q > 0:
        return f"n^{q.numerator}"
    return f"n^({_fmt_q(q)})"


def _fmt_exact(t: ExactTerm) -> str:
    s, c = _fmt_npow(t.q), t.coeff
    if not s:
        return str(c)
    if c.is_constant():
        v = c.constant()
        return s if v == 1 else ("-" + s if v == -1 else f"{_fmt_q(v)}*{s}")
    if len(c.items()) == 1:
        return f"{c}*{s}"
    return f"({c})*{s}"


def _fmt_b(t: BTerm) -> str:
    s, m = _fmt_npow(t.q), t.majorant
    if m.is_constant():
        v = m.constant()
        body = (s or "1") if v == 1 else (f"{_fmt_q(v)}*{s}" if s else _fmt_q(v))
    else:
        if len(m.items()) == 1:
            d, c = m.items()[0]
            kp = f"abs(k^{d})" if d > 1 else "abs(k)"
            body = kp if c == 1 else f"{_fmt_q(c)}*{kp}"
        else:
            body = f"(abs({m}))"
        if s:
            body += "*" + s
    return f"B({body}, n >= {t.valid_from})"


def _fmt_term(t: Term) -> str:
    if isinstance(t, ExactTerm):
        return _fmt_exact(t)
    if isinstance(t, BTerm):
        return _fmt_b(t)
    return f"O({_fmt_npow(t.q) or 1})"


# --------------------------------------------------------------------------
# expansions


def _as_fraction(x) -> Fraction | None:
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return None


class Expansion:
    """Immutable asymptotic expansion; terms are sorted by descending growth."""

    __slots__ = ("config", "terms")

    def __init__(self, config: RingConfig, terms: Iterable[Term] = (), *, normalize: bool = True):
        self.config = config
        self.terms = _normalize(terms, config) if normalize else tuple(terms)

    # construction helpers
    def _new(self, terms, normalize=True) -> "Expansion":
        return Expansion(self.config, terms, normalize=normalize)

    def _coerce(self, other) -> "Expansion | None":
        if isinstance(other, Expansion):
            if other.config != self.config:
                raise ValueError("expansions belong to different rings")
            return other
        c = _as_fraction(other)
        if c is None:
            return None
        return self._new([ExactTerm(KPolynomial(c), Fraction(0))] if c else [])

    # inspection
    def exact_terms(self) -> list[ExactTerm]:
        return [t for t in self.terms if isinstance(t, ExactTerm)]

    def bterms(self) -> list[BTerm]:
        return [t for t in self.terms if isinstance(t, BTerm)]

    def oterm(self) -> OTerm | None:
        return next((t for t in self.terms if isinstance(t, OTerm)), None)

    def exact_part(self) -> "Expansion":
        return self._new(self.exact_terms())

    def error_part(self) -> "Expansion":
        return self._new([t for t in self.terms if not isinstance(t, ExactTerm)])

    def is_zero(self) -> bool:
        return not self.terms

    def upper_growth(self) -> Fraction:
        return max(growth_range(t, self.config).upper for t in self.terms)

    def growth_ranges(self) -> list[tuple[Term, GrowthRange]]:
        return [(t, growth_range(t, self.config)) for t in self.terms]

    def valid_from(self) -> int:
        return max((t.valid_from for t in self.bterms()), default=1)

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._new(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new(
            [ExactTerm(-t.coeff, t.q) if isinstance(t, ExactTerm) else t for t in self.terms],
            normalize=False,
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cfg = self.config
        out: list[Term] = []
        for s in self.terms:
            for t in other.terms:
                out.append(_mul_terms(s, t, cfg))
        return self._new(out)

    __rmul__ = __mul__

    def scale(self, c: Number) -> "Expansion":
        return self * Fraction(c)

    def __truediv__(self, other):
        c = _as_fraction(other)
        if c is not None:
            if c == 0:
                raise ZeroDivisionError("division of an expansion by zero")
            return self * (1 / c)
        if not isinstance(other, Expansion):
            return NotImplemented
        return self * invert_leading_kfree(other, self.config.default_prec)

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return c / self

    def __pow__(self, e):
        e = Fraction(e)
        if e.denominator == 1 and e >= 0:
            result = self._coerce(1)
            for _ in range(int(e)):
                result = result * self
            return result
        if len(self.terms) == 1 and isinstance(self.terms[0], ExactTerm):
            t = self.terms[0]
            if t.coeff.is_constant() and (t.coeff.constant() == 1 or e.denominator == 1):
                return self._new([ExactTerm(KPolynomial(t.coeff.constant() ** int(e) if e.denominator == 1 else 1), t.q * e)])
        if e.denominator == 1:
            return invert_leading_kfree(self, self.config.default_prec) ** (-e)
        raise ValueError("rational powers are only supported for monomials in n")

    def __eq__(self, other):
        other_e = self._coerce(other) if not isinstance(other, Expansion) else other
        if other_e is None:
            return NotImplemented
        return self.config == other_e.config and self.terms == other_e.terms

    def __hash__(self):
        return hash((self.config, self.terms))

    # evaluation
    def envelope(self, n, k, dps: int = 50):
        """(center, radius) at a sample point; radius sums the B-term majorants."""
        if self.oterm() is not None:
            raise ValueError("O-terms have no explicit envelope")
        with mpmath.workdps(dps):
            n_, k_ = mpmath.mpf(n), mpmath.mpf(k)
            center = mpmath.mpf(0)
            radius = mpmath.mpf(0)
            for t in self.terms:
                c = _coeff(t)
                val = sum((mpmath.mpf(cf.numerator) / cf.denominator * k_**d for d, cf in c.items()), mpmath.mpf(0))
                val *= mpmath.power(n_, mpmath.mpf(t.q.numerator) / t.q.denominator)
                if isinstance(t, ExactTerm):
                    center += val
                else:
                    radius += val
            return +center, +radius

    # output
    def __str__(self):
        if not self.terms:
            return "0"
        return _join([_fmt_term(t) for t in self.terms])

    def __repr__(self):
        return str(self)

    def to_json(self) -> dict:
        cfg = self.config
        terms = []
        for t in self.terms:
            if isinstance(t, ExactTerm):
                terms.append({"kind": "exact", "coeff": t.coeff.to_json(), "q": _fmt_q(t.q)})
            elif isinstance(t, BTerm):
                terms.append(
                    {"kind": "B", "coeff": t.majorant.to_json(), "q": _fmt_q(t.q), "valid_from": t.valid_from}
                )
            else:
                terms.append({"kind": "O", "q": _fmt_q(t.q)})
        return {
            "schema": 1,
            "config": {
                "alpha": _fmt_q(cfg.alpha),
                "beta": _fmt_q(cfg.beta),
                "round_digits": cfg.round_digits,
                "default_prec": cfg.default_prec,
            },
            "terms": terms,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict | str) -> "Expansion":
        if isinstance(data, str):
            data = json.loads(data)
        c = data["config"]
        cfg = RingConfig(Fraction(c["alpha"]), Fraction(c["beta"]), c["round_digits"], c["default_prec"])
        terms: list[Term] = []
        for t in data["terms"]:
            q = Fraction(t["q"])
            if t["kind"] == "exact":
                terms.append(ExactTerm(KPolynomial.from_json(t["coeff"]), q))
            elif t["kind"] == "B":
                terms.append(BTerm(KPolynomial.from_json(t["coeff"]), q, int(t["valid_from"])))
            elif t["kind"] == "O":
                terms.append(OTerm(q))
            else:
                raise ValueError(f"unknown term kind {t['kind']!r}")
        return cls(cfg, terms, normalize=False)


def _mul_terms(s: Term, t: Term, cfg: RingConfig) -> Term:
    if isinstance(s, OTerm) or isinstance(t, OTerm):
        return OTerm(growth_range(s, cfg).upper + growth_range(t, cfg).upper)
    q = s.q + t.q
    if isinstance(s, ExactTerm) and isinstance(t, ExactTerm):
        return ExactTerm(s.coeff * t.coeff, q)
    v = max(getattr(s, "valid_from", 1), getattr(t, "valid_from", 1))
    return _make_b(_coeff(s).abs() * _coeff(t).abs(), q, v, cfg)


class AsymptoticRing:
    """Factory for expansions sharing one :class:`RingConfig`."""

    def __init__(self, alpha: Number = 0, beta: Number = 1, round_digits: int | None = None, default_prec: int = 5):
        self.config = RingConfig(Fraction(alpha), Fraction(beta), round_digits, default_prec)

    def __repr__(self):
        c = self.config
        return f"AsymptoticRing(n^QQ, k in [n^{c.alpha}, n^{c.beta}])"

    def zero(self) -> Expansion:
        return Expansion(self.config)

    def const(self, c: Number) -> Expansion:
        return Expansion(self.config, [ExactTerm(KPolynomial(c), Fraction(0))])

    def monomial(self, coeff: KPolynomial | Number, q: Number) -> Expansion:
        if not isinstance(coeff, KPolynomial):
            coeff = KPolynomial(coeff)
        return Expansion(self.config, [ExactTerm(coeff, Fraction(q))])

    def gens(self) -> tuple[Expansion, Expansion]:
        return self.monomial(1, 1), self.monomial(KPolynomial.k(), 0)

    def B(self, expr: Expansion | Number, valid_from: int) -> Expansion:
        """Error term ``B_{n >= valid_from}(|expr|)``; ``expr`` must be exact."""
        if not isinstance(expr, Expansion):
            expr = self.const(expr)
        if expr.oterm() is not None or expr.bterms():
            raise ValueError("B() takes an exact expression")
        return Expansion(self.config, [_make_b(t.coeff, t.q, valid_from, self.config) for t in expr.terms])

    def O(self, expr: Expansion | Number) -> Expansion:
        if not isinstance(expr, Expansion):
            expr = self.const(expr)
        if expr.is_zero():
            return expr
        return Expansion(self.config, [OTerm(expr.upper_growth())])


# --------------------------------------------------------------------------
# simplification


def _split_exact(x: Expansion, errors: list[Term], absorb_fn):
    """Split exact terms into monomials and let ``absorb_fn`` take eligible ones.

    Returns the new error list and the surviving exact terms, regrouped per
    n-power into monomials that were never candidates and monomials that were
    candidates for absorption but could not be absorbed.
    """
    cfg = x.config
    out: list[Term] = []
    for t in x.exact_terms():
        kept, failed = {}, {}
        for d, c in t.coeff.items():
            m = ExactTerm(KPolynomial({d: c}), t.q)
            g = growth_range(m, cfg)
            candidate = any(growth_range(e, cfg).upper >= g.upper for e in errors)
            if candidate and absorb_fn(m):
                continue
            (failed if candidate else kept)[d] = c
        if kept:
            out.append(ExactTerm(KPolynomial(kept), t.q))
        if failed:
            out.append(ExactTerm(KPolynomial(failed), t.q))
    return out


def simplify_expansion(x: Expansion, simplify_bterm_growth: bool = False) -> Expansion:
    """Expand coefficients into monomials and perform all admissible partial absorptions.

    With ``simplify_bterm_growth`` the B-terms are first collapsed to a single
    k-free B-term (see :func:`collapse_bterm_growth`).
    """
    if simplify_bterm_growth:
        return collapse_bterm_growth(x)
    cfg = x.config
    bs = x.bterms()
    o = x.oterm()
    errors: list[Term] = list(bs) + ([o] if o else [])

    def absorb(m: ExactTerm) -> bool:
        if o is not None and growth_range(m, cfg).upper <= o.q:
            return True
        i = _pick_bterm(bs, m, cfg)
        if i is None:
            return False
        bs[i] = absorb_into_bterm(bs[i], m, cfg)
        return True

    exact = _split_exact(x, errors, absorb)
    terms = exact + bs + ([o] if o else [])
    terms.sort(key=lambda t: _sort_key(t, cfg))
    return Expansion(cfg, terms, normalize=False)


def collapse_bterm_growth(x: Expansion) -> Expansion:
    """Replace k by n^beta in all B-terms and merge them into one k-free B-term."""
    cfg = x.config
    bs = x.bterms()
    if not bs:
        return simplify_expansion(x)
    v = max(b.valid_from for b in bs)
    top = max(growth_range(b, cfg).upper for b in bs)
    const = Fraction(0)
    for b in sorted(bs, key=lambda t: _sort_key(t, cfg)):
        for d, c in b.majorant.items():
            const = cfg.round(UpperSum(const).add(c, v, b.q + cfg.beta * d - top))
    collapsed = [BTerm(KPolynomial(const), top, v)]
    o = x.oterm()
    errors: list[Term] = collapsed + ([o] if o else [])

    def absorb(m: ExactTerm) -> bool:
        if o is not None and growth_range(m, cfg).upper <= o.q:
            return True
        if not _absorbable(collapsed[0], m, cfg):
            return False
        collapsed[0] = absorb_into_bterm(collapsed[0], m, cfg)
        return True

    exact = _split_exact(x, errors, absorb)
    terms = exact + collapsed + ([o] if o else [])
    terms.sort(key=lambda t: _sort_key(t, cfg))
    return Expansion(cfg, terms, normalize=False)


# --------------------------------------------------------------------------
# series of expansions


def _abs_bterms(x: Expansion, valid_from: int) -> Expansion:
    """Every term replaced by a B-term with its absolute coefficients."""
    cfg = x.config
    if x.oterm() is not None:
        raise ValueError("explicit bounds need an expansion without O-terms")
    return Expansion(cfg, [_make_b(_coeff(t), t.q, max(valid_from, getattr(t, "valid_from", 1)), cfg) for t in x.terms])


def argument_radius(x: Expansion, valid_from: int) -> Fraction:
    """Upper bound of ``|x|`` for ``n >= valid_from`` (requires non-positive upper growth)."""
    cfg = x.config
    if x.oterm() is not None:
        raise ValueError("argument radius needs an expansion without O-terms")
    acc = UpperSum()
    for t in x.terms:
        if growth_range(t, cfg).upper > 0:
            raise ValueError(f"term {_fmt_term(t)} grows with n; no uniform radius")
        v = max(valid_from, getattr(t, "valid_from", 1))
        for d, c in _coeff(t).items():
            acc.add(abs(c), v, t.q + cfg.beta * d)
    return acc.upper(None if acc.is_rational else 30)


def invert_leading_kfree(x: Expansion, prec: int | None = None, valid_from: int | None = None) -> Expansion:
    """``1/x`` by a geometric series in ``x / leading_term - 1``.

    The truncation error is an O-term, or a B-term when ``valid_from`` is given.
    """
    cfg = x.config
    prec = cfg.default_prec if prec is None else prec
    if x.is_zero():
        raise ZeroDivisionError("inversion of the zero expansion")
    lead = x.terms[0]
    if not isinstance(lead, ExactTerm) or not lead.coeff.is_constant():
        raise ValueError("leading term must be an exact k-free term")
    c0 = lead.coeff.constant()
    inv_lead = Expansion(cfg, [ExactTerm(KPolynomial(1 / c0), -lead.q)])
    u = x * inv_lead - 1
    if u.is_zero():
        return inv_lead
    if u.upper_growth() >= 0:
        raise ValueError("inversion needs the non-leading part to be of smaller growth")
    neg_u = -u
    total = Expansion(cfg, [ExactTerm(KPolynomial(1), Fraction(0))])
    power = total
    for _ in range(1, prec):
        power = power * neg_u
        total = total + power
    if valid_from is None:
        total = total + Expansion(cfg, [OTerm(u.upper_growth() * prec)])
    else:
        r = argument_radius(u, valid_from)
        if r >= 1:
            raise ValueError(f"geometric remainder diverges at valid_from={valid_from} (radius {r})")
        absu = _abs_bterms(u, valid_from) ** prec
        total = total + absu * Fraction(1) / (1 - r)
    return total * inv_lead


def exp_expansion(x: Expansion, prec: int | None = None) -> Expansion:
    """Automatic expansion of ``exp(x)`` with an O-term remainder (``x`` must be o(1))."""
    cfg = x.config
    prec = cfg.default_prec if prec is None else prec
    if x.is_zero():
        return Expansion(cfg, [ExactTerm(KPolynomial(1), Fraction(0))])
    g = x.upper_growth()
    if g >= 0:
        raise ValueError("exp_expansion needs an argument of negative growth")
    total = Expansion(cfg, [ExactTerm(KPolynomial(1), Fraction(0))])
    power = total
    for i in range(1, prec):
        power = power * x
        total = total + power * Fraction(1, factorial(i))
    return total + Expansion(cfg, [OTerm(g * prec)])
