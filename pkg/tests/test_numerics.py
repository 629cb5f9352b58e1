from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigasym.interval import PI, ComplexInterval, Interval, IntervalError, log_int
from rigasym.special import (
    digamma_enclosure,
    gamma_enclosure,
    log_abs_gamma,
    loggamma_enclosure,
    logzeta_curvature_bound,
    trigamma_enclosure,
    zeta_enclosure,
    zeta_with_derivative,
)



@pytest.fixture(autouse=True)
def _high_precision():
    with mpmath.workdps(60):
        yield


def _frac(x) -> F:
    sign, man, e, _ = mpmath.mpf(x)._mpf_
    v = F(int(man)) * F(2) ** e
    return -v if sign else v


def _inside(iv: Interval, x) -> bool:
    return iv.contains(_frac(x))


def _cinside(z: ComplexInterval, x) -> bool:
    x = mpmath.mpc(x)
    return _inside(z.re, x.real) and _inside(z.im, x.imag)


# ------------------------------------------------------------- Interval
def test_interval_basics():
    a = Interval(1, 2)
    assert (a - a).contains(0)
    assert (a * Interval(-1, 3)).contains(Interval(-2, 6))
    assert Interval("0.1").contains(F(1, 10))
    with pytest.raises(ValueError):
        Interval(2, 1)
    with pytest.raises(IntervalError):
        Interval(-1, 1).reciprocal()


def test_pi_and_logs():
    assert _inside(PI, mpmath.pi)
    assert _inside(log_int(10), mpmath.log(10))
    assert float(PI.width()) < 1e-35


reals = st.fractions(F(-20), F(20), max_denominator=1000)


@settings(max_examples=200, deadline=None)
@given(reals, reals, st.sampled_from(["add", "mul", "div", "exp", "sin", "cos", "atan", "sqrt", "log", "sinh"]))
def test_interval_containment(a, b, op):
    x, y = mpmath.mpf(a.numerator) / a.denominator, mpmath.mpf(b.numerator) / b.denominator
    I, J = Interval(a), Interval(b)
    if op == "add":
        assert _inside(I + J, x + y)
    elif op == "mul":
        assert _inside(I * J, x * y)
    elif op == "div":
        if b != 0:
            assert _inside(I / J, x / y)
    elif op == "exp":
        assert _inside(I.exp(), mpmath.exp(x))
    elif op == "sin":
        assert _inside(I.sin(), mpmath.sin(x))
    elif op == "cos":
        assert _inside(I.cos(), mpmath.cos(x))
    elif op == "atan":
        assert _inside(I.atan(), mpmath.atan(x))
    elif op == "sinh":
        assert _inside(I.sinh(), mpmath.sinh(x))
    elif op == "sqrt":
        assert _inside(abs(I).sqrt(), mpmath.sqrt(abs(x)))
    elif op == "log":
        if a > 0:
            assert _inside(I.log(), mpmath.log(x))


@settings(max_examples=200, deadline=None)
@given(reals, reals)
def test_complex_containment(a, b):
    z = ComplexInterval(Interval(a), Interval(b))
    w = mpmath.mpc(mpmath.mpf(a.numerator) / a.denominator, mpmath.mpf(b.numerator) / b.denominator)
    assert _cinside(z * z, w * w)
    assert _cinside(z.exp(), mpmath.exp(w))
    if abs(w) > 0:
        assert _cinside(z.reciprocal(), 1 / w)


# ----------------------------------------------------- classical values
@pytest.mark.parametrize(
    "fn, arg, value",
    [
        (zeta_enclosure, 0, lambda: mpmath.mpf(-1) / 2),
        (zeta_enclosure, 2, lambda: mpmath.pi**2 / 6),
        (gamma_enclosure, F(1, 2), lambda: mpmath.sqrt(mpmath.pi)),
        (gamma_enclosure, 5, lambda: mpmath.mpf(24)),
    ],
)
def test_classical_values(fn, arg, value):
    z = fn(ComplexInterval(Interval(arg)))
    assert _cinside(z, value())
    assert float(z.width()) < 1e-20


# -------------------------------------------- special functions vs oracle
points = st.tuples(
    st.fractions(F(-15, 2), F(12), max_denominator=64),
    st.fractions(F(-60), F(60), max_denominator=64),
)


def _mp(s):
    return mpmath.mpc(mpmath.mpf(s[0].numerator) / s[0].denominator, mpmath.mpf(s[1].numerator) / s[1].denominator)


def _box(s):
    return ComplexInterval(Interval(s[0]), Interval(s[1]))


@settings(max_examples=200, deadline=None)
@given(points)
def test_zeta_contains_oracle(s):
    w = _mp(s)
    if abs(w - 1) < mpmath.mpf("0.01"):
        return
    assert _cinside(zeta_enclosure(_box(s)), mpmath.zeta(w))


@settings(max_examples=200, deadline=None)
@given(points)
def test_gamma_family_contains_oracle(s):
    w = _mp(s)
    if s[1] == 0 and s[0] <= 0 and s[0].denominator == 1:
        with pytest.raises(IntervalError):
            gamma_enclosure(_box(s))
        return
    if abs(w - mpmath.nint(w.real)) < mpmath.mpf("0.01") and w.real <= 0:
        return
    assert _cinside(gamma_enclosure(_box(s)), mpmath.gamma(w))
    assert _inside(log_abs_gamma(_box(s)), mpmath.log(abs(mpmath.gamma(w))))
    assert _cinside(digamma_enclosure(_box(s)), mpmath.digamma(w))
    assert _cinside(trigamma_enclosure(_box(s)), mpmath.psi(1, w))
    lg = loggamma_enclosure(_box(s))
    assert _inside(lg.re, mpmath.log(abs(mpmath.gamma(w))))


def test_zeta_derivative():
    s = ComplexInterval(Interval(F(3, 2)), Interval(7))
    z, dz = zeta_with_derivative(s)
    w = mpmath.mpc(1.5, 7)
    assert _cinside(z, mpmath.zeta(w))
    assert _cinside(dz, mpmath.zeta(w, derivative=1))


def test_box_enclosure_covers_interior_points():
    box = ComplexInterval(Interval(F(2), F(21, 10)), Interval(F(3), F(31, 10)))
    z = zeta_enclosure(box)
    for x, y in [(2, 3), (2.05, 3.05), (2.1, 3.1)]:
        assert _cinside(z, mpmath.zeta(mpmath.mpc(x, y)))


@pytest.mark.parametrize("sigma", [F(3, 2), F(2), F(3)])
def test_logzeta_curvature_bound(sigma):
    # sum Lambda(n) log n n^(-sigma) is the second derivative of log zeta
    true = mpmath.diff(lambda x: mpmath.log(mpmath.zeta(x)), mpmath.mpf(sigma.numerator) / sigma.denominator, 2)
    b = logzeta_curvature_bound(sigma)
    assert _frac(true) <= b <= 2 * _frac(true) + 1
