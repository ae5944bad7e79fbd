import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as sp_integrate

from potbal.errors import QuadratureFailure
from potbal.quadrature import integrate
from potbal.verdict import Verdict, slope_verdict, tail_slope


@pytest.mark.parametrize(
    "f,a,b,bp",
    [
        (np.sin, 0.0, math.pi, ()),
        (lambda x: np.log(np.abs(x - 0.3)), 0.0, 1.0, (0.3,)),
        (lambda x: 1.0 / (1.0 + x**2), -50.0, 50.0, ()),
        (lambda x: np.sqrt(np.abs(x)), -1.0, 2.0, (0.0,)),
        (lambda x: np.exp(-x) * np.cos(5 * x), 0.0, 10.0, ()),
    ],
)
def test_against_scipy(f, a, b, bp):
    ref, _ = sp_integrate.quad(lambda t: float(f(np.array([t]))[0]), a, b, points=bp or None, limit=500, epsabs=1e-13)
    res = integrate(f, a, b, breakpoints=bp, rtol=1e-11)
    assert res.value == pytest.approx(ref, rel=1e-9, abs=1e-12)
    assert res.error <= 1e-9 * max(1.0, abs(ref))


def test_reversed_limits_and_empty():
    assert integrate(np.cos, 1.0, 0.0).value == pytest.approx(-math.sin(1.0), rel=1e-12)
    assert integrate(np.cos, 2.0, 2.0).value == 0.0


def test_non_finite_integrand():
    with pytest.raises(QuadratureFailure):
        integrate(lambda x: 1.0 / x, -1.0, 1.0, breakpoints=(0.0,))


def test_infinite_limits_rejected():
    with pytest.raises(ValueError):
        integrate(np.cos, 0.0, math.inf)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=6), st.floats(-5, 5), st.floats(0.01, 5))
def test_polynomials_exact(coefs, a, w):
    p = np.polynomial.Polynomial(coefs)
    exact = p.integ()(a + w) - p.integ()(a)
    assert integrate(p, a, a + w).value == pytest.approx(exact, abs=1e-11)


class TestSlope:
    def test_flat_and_linear(self):
        x = np.arange(10.0)
        assert tail_slope(x, np.ones(10)) == 0.0
        assert tail_slope(x, 2 * x + 1) == pytest.approx(2.0)

    def test_only_upper_half_is_fitted(self):
        x = np.arange(10.0)
        y = np.where(x < 5, x, 5.0)
        assert tail_slope(x, y) == 0.0

    def test_too_few_points(self):
        assert math.isnan(tail_slope(np.arange(4.0), np.arange(4.0)))
        assert slope_verdict(float("nan"), 0.05) is Verdict.INCONCLUSIVE

    def test_threshold(self):
        assert slope_verdict(0.049, 0.05) is Verdict.BOUNDED
        assert slope_verdict(0.05, 0.05) is Verdict.UNBOUNDED
