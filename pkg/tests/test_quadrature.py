from fractions import Fraction as F

import mpmath
import pytest

from rigasym.interval import Interval
from rigasym.quadrature import (
    AffineMap,
    MidpointIntegrand,
    gamma_line_bound,
    line_segment_enclosure,
    vertical_tail_bound,
    zeta_line_bound,
)


def _gauss():
    f = lambda w: (-(w * w)).exp()  # noqa: E731
    # (e^(-w^2))'' = (4w^2 - 2) e^(-w^2)
    d2 = lambda w: (Interval(4) * w * w - Interval(2)) * (-(w * w)).exp()  # noqa: E731
    return MidpointIntegrand(f, d2)


def test_gaussian_segment():
    res = line_segment_enclosure(_gauss(), 0, 0, 3, F(1, 10**6))
    true = mpmath.quad(lambda t: mpmath.exp(-t * t), [0, 3])
    assert res.enclosure.lo <= true <= res.enclosure.hi
    assert res.width <= 1e-6 and not res.flagged


def test_box_only_integrand():
    res = line_segment_enclosure(lambda w: w * w, 0, 0, 1, F(1, 1000))
    assert res.enclosure.contains(F(1, 3))


def test_piece_budget_flags():
    res = line_segment_enclosure(lambda w: w.exp(), 0, 0, 5, F(1, 10**12), max_pieces=16)
    assert res.flagged and res.pieces == 16
    assert res.enclosure.lo <= mpmath.e**5 - 1 <= res.enclosure.hi


def test_empty_segment():
    with pytest.raises(ValueError):
        line_segment_enclosure(lambda w: w, 0, 1, 1, F(1, 10))


def test_refinement_tree_recorded():
    res = line_segment_enclosure(lambda w: w * w, 0, 0, 1, F(1, 10), record_tree=True)
    assert res.tree[0] == ["0", "1"] and len(res.tree) == res.pieces


def test_gamma_line_bound_dominates():
    b = gamma_line_bound(F(5, 2), 1, 100)
    for w in (100, 150, 400):
        assert abs(mpmath.gamma(mpmath.mpc(2.5, w))) <= b.value(w).hi


@pytest.mark.parametrize("x", [F(2), F(1), F(1, 2), F(-1, 2), F(-3)])
def test_zeta_line_bound_dominates(x):
    b = zeta_line_bound(x, 2, 50)
    for w in (50, 80, 333):
        assert abs(mpmath.zeta(mpmath.mpc(float(x), 2 * w))) <= b.value(w).hi


def test_zeta_line_bound_unsupported():
    with pytest.raises(ValueError):
        zeta_line_bound(F(4, 5), 1, 200)
    with pytest.raises(ValueError):
        zeta_line_bound(2, 1, 10)


def test_vertical_tail_dominates_numeric_tail():
    # integrand |zeta(2s) zeta(2s - 1) Gamma(s)| on Re s = 3/2
    z1, z2, g = AffineMap(F(2), F(0)), AffineMap(F(2), F(-1)), AffineMap(F(1), F(0))
    C = vertical_tail_bound(F(3, 2), 100, (z1, z2), g)
    f = lambda w: abs(mpmath.zeta(3 + 2j * w) * mpmath.zeta(2 + 2j * w) * mpmath.gamma(1.5 + 1j * w))  # noqa: E731
    numeric = 2 * mpmath.quad(f, [100, 110, 130, 200])
    assert numeric <= mpmath.mpf(C.numerator) / C.denominator
    with pytest.raises(ValueError):
        vertical_tail_bound(F(3, 2), 10, (z1, z2), g)
