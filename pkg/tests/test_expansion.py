from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigasym.expansion import (
    AbsorptionError,
    AsymptoticRing,
    BTerm,
    Expansion,
    KPolynomial,
    argument_radius,
    round_up_constant,
    simplify_expansion,
)


@pytest.fixture
def ring():
    return AsymptoticRing(0, F(4, 7), 3, 5)


def test_kpolynomial_arithmetic():
    p = KPolynomial({0: 1, 2: F(1, 2)})
    q = KPolynomial.k() - 1
    assert (p * q).as_dict() == {0: -1, 1: 1, 2: F(-1, 2), 3: F(1, 2)}
    assert (p - p).as_dict() == {}
    assert p(F(2)) == 3
    assert KPolynomial({1: -2, 3: 5}).abs_sum() == 7


def test_bterm_rejects_negative_majorant():
    with pytest.raises(ValueError):
        BTerm(KPolynomial({1: -1}), F(-1), 10)


def test_exact_arithmetic(ring):
    n, k = ring.gens()
    assert str((n + 1) * (n - 1)) == "n^2 - 1"
    assert str(n**-1 * n) == "1"
    assert (n + k) - k == n


def test_growth_range_orders_terms(ring):
    n, k = ring.gens()
    e = k * n**2 + ring.O(n ** F(3, 2)) + k**3 * n
    assert str(e) == "k^3*n + k*n^2 + O(n^(3/2))"
    ranges = [g for _, g in e.growth_ranges()]
    assert ranges[0] == (1, F(19, 7))
    assert ranges[1] == (2, F(18, 7))
    assert ranges[2] == (F(3, 2), F(3, 2))


def test_bterm_absorbs_weaker_term(ring):
    n, _ = ring.gens()
    e = ring.B(5 / n, 10) + 3 / n**2
    (b,) = e.bterms()
    assert b.majorant.as_dict() == {0: F(53, 10)}
    assert b.valid_from == 10


def test_bterm_does_not_absorb_stronger_term(ring):
    n, _ = ring.gens()
    e = ring.B(1 / n**2, 10) + 1 / n
    assert len(e.exact_terms()) == 1 and len(e.bterms()) == 1


def test_round_up_constant():
    assert round_up_constant(F(222301, 10**7), 4) == F(223, 10000)
    assert round_up_constant(F(1, 4), None) == F(1, 4)
    with pytest.raises(ValueError):
        round_up_constant(F(-1), 2)


def test_o_term_has_no_envelope(ring):
    n, _ = ring.gens()
    with pytest.raises(ValueError):
        (1 + ring.O(1 / n)).envelope(100, 3)


def test_argument_radius(ring):
    n, k = ring.gens()
    assert argument_radius(1 / n, 10) == F(1, 10)
    with pytest.raises(ValueError):
        argument_radius(k * n ** F(-1, 2), 10)


def test_json_round_trip(ring):
    n, k = ring.gens()
    e = 1 + k / n + ring.B(k**2 / n**2, 10)
    assert Expansion.from_json(e.dumps()) == e


def test_simplify_partially_absorbs(ring):
    n, k = ring.gens()
    e = 1 + (1 + k) ** 3 / n**3 + ring.O(n ** F(-15, 7))
    s = simplify_expansion(e)
    # 1 and 3k are below n^(-15/7) on the whole range; k^3 and 3k^2 are not
    (t,) = [t for t in s.exact_terms() if t.q == -3]
    assert t.coeff.as_dict() == {3: 1, 2: 3}


# ---------------------------------------------------------------- properties
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def b_expressions(draw):
    """A random expansion with exact terms and one B-term, plus a valid sample."""
    ring = AsymptoticRing(0, F(1, 2), 3, 5)
    n, k = ring.gens()
    e = ring.const(draw(coeffs))
    for q in (-1, -2):
        poly = KPolynomial({d: draw(coeffs) for d in range(0, 2)})
        e = e + ring.monomial(poly, q)
    e = e + ring.B(ring.monomial(KPolynomial({1: draw(st.fractions(0, 3, max_denominator=5))}), -2), 10)
    other = ring.monomial(KPolynomial({0: draw(coeffs), 1: draw(coeffs)}), -3)
    nn = draw(st.integers(10, 10**6))
    kk = draw(st.integers(1, max(1, int(nn**0.5))))
    theta = draw(st.floats(-1, 1))
    return e, other, nn, kk, theta


def _close(f, c, r):
    slack = mpmath.mpf(10) ** -30 * (abs(c) + r + 1)
    return abs(f - c) <= r + slack


def _value(e: Expansion, n, k, theta):
    # any function inside the envelope of e: exact part plus theta times the B-term bound
    c, r = e.envelope(n, k)
    return c + theta * r


@settings(max_examples=500, deadline=None)
@given(b_expressions())
def test_envelope_sound_under_addition(data):
    e, other, n, k, theta = data
    with mpmath.workdps(50):
        f = _value(e, n, k, theta) + other.envelope(n, k)[0]
        c, r = (e + other).envelope(n, k)
        assert _close(f, c, r)


@settings(max_examples=500, deadline=None)
@given(b_expressions())
def test_envelope_sound_under_multiplication(data):
    e, other, n, k, theta = data
    o = other + 1
    with mpmath.workdps(50):
        f = _value(e, n, k, theta) * o.envelope(n, k)[0]
        c, r = (e * o).envelope(n, k)
        assert _close(f, c, r)


def test_absorption_error_is_value_error():
    assert issubclass(AbsorptionError, ValueError)
