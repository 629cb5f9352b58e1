from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from rigasym.expansion import AsymptoticRing
from rigasym.taylor import KERNELS, bernoulli, exp_upper, faulhaber, get_kernel, taylor_with_explicit_error


def test_bernoulli_matches_sympy():
    for m in range(0, 24):
        expected = sympy.bernoulli(m)
        if m == 1:
            expected = sympy.Rational(-1, 2)  # convention B_1 = -1/2
        assert bernoulli(m) == F(int(expected.p), int(expected.q))


@pytest.mark.parametrize("r", [1, 2, 3, 5, 8])
def test_faulhaber_power_sums(r):
    p = faulhaber(r)
    for k in (1, 2, 7, 30):
        assert p(k) == sum(j**r for j in range(1, k + 1))


def test_exp_upper_is_upper():
    with mpmath.workdps(60):
        for r in (F(0), F(1, 10), F(7, 3), F(-1, 3), F(10**40 + 1, 3 * 10**39)):
            up = exp_upper(r)
            assert mpmath.mpf(up.numerator) / up.denominator >= mpmath.exp(mpmath.mpf(r.numerator) / r.denominator)


def test_kernel_coefficients_match_sympy():
    t = sympy.Symbol("t")
    for name, ker in KERNELS.items():
        series = sympy.series(sympy.sympify(ker.sympy_expr), t, 0, 8).removeO()
        for i in range(8):
            c = series.coeff(t, i)
            assert ker.coeff(i) == F(int(c.p), int(c.q)), (name, i)


def test_unknown_kernel():
    with pytest.raises(KeyError):
        get_kernel("sinh")


def test_radius_violation():
    ring = AsymptoticRing(0, F(1, 2), 3)
    n, k = ring.gens()
    with pytest.raises(ValueError):
        taylor_with_explicit_error("geometric", 20 / n, 3, 10)


def test_order_must_be_positive():
    ring = AsymptoticRing(0, F(1, 2), 3)
    n, _ = ring.gens()
    with pytest.raises(ValueError):
        taylor_with_explicit_error("exp", 1 / n, 0, 10)


def test_zero_argument():
    ring = AsymptoticRing(0, F(1, 2), 3)
    e = taylor_with_explicit_error("exp", ring.zero(), 3, 10)
    assert str(e) == "1"


_FUNCS = {
    "exp": mpmath.exp,
    "geometric": lambda t: 1 / (1 - t),
    "even_geometric": lambda t: 1 / (1 - t * t),
    "log1p": mpmath.log1p,
}


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from(sorted(KERNELS)),
    st.integers(1, 5),
    st.fractions(-2, 2, max_denominator=5),
    st.fractions(0, 2, max_denominator=5),
    st.integers(10, 10**5),
    st.floats(0, 1),
    st.floats(-1, 1),
)
def test_taylor_envelope_contains_function(name, order, a, b, n, kfrac, theta):
    ring = AsymptoticRing(0, F(1, 2), 4)
    nn, kk = ring.gens()
    arg = (a + b * kk) / nn + ring.B(kk**2 / nn**2, 10)
    ex = taylor_with_explicit_error(name, arg, order, 10)
    k = max(1, int(kfrac * n**0.5))
    with mpmath.workdps(40):
        c_arg, r_arg = arg.envelope(n, k)
        t = c_arg + theta * r_arg
        c, r = ex.envelope(n, k)
        assert abs(_FUNCS[name](t) - c) <= r * (1 + mpmath.mpf(10) ** -25) + mpmath.mpf(10) ** -35
