import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from sibuya import ConfigurationError, ConstantRate, DomainError, LinearRate, PiecewiseConstantRate, rate_from_dict
from sibuya.rates import quadratic_inverse

RATES = [
    ConstantRate(0.5),
    LinearRate(0.1, 4.0),
    LinearRate(2.0, 0.0),
    PiecewiseConstantRate((1.0, 3.0), (0.2, 0.05, 0.3)),
    PiecewiseConstantRate((0.5, 2.0), (1.0, 0.0, 0.6)),
]


def test_constant_integral_and_inverse():
    r = ConstantRate(0.5)
    assert r.integrate(2.0) == 1.0
    assert r.inverse_integrated(1.0) == 2.0


def test_linear_integral_against_quadrature():
    r = LinearRate(0.1, 4.0)
    oracle, _ = integrate.quad(lambda s: 0.1 * s + 4.0, 0.0, 2.0, epsabs=1e-13)
    assert_allclose(r.integrate(2.0), 8.2, rtol=0, atol=1e-12)
    assert_allclose(r.integrate(2.0), oracle, rtol=0, atol=1e-12)
    assert_allclose(r.inverse_integrated(8.2), 2.0, rtol=1e-14)


def test_quadratic_inverse_is_stable_for_tiny_curvature():
    # textbook form (sqrt(b^2 + 2ay) - b) / a loses every digit here
    assert_allclose(quadratic_inverse(1e-14, 1.0, 3.0), 3.0, rtol=1e-12)


@pytest.mark.parametrize("rate", RATES, ids=lambda r: repr(r))
def test_zero_is_fixed_point(rate):
    assert rate.integrate(0.0) == 0.0
    assert rate.inverse_integrated(0.0) == 0.0


@pytest.mark.parametrize("rate", RATES, ids=lambda r: repr(r))
def test_integral_matches_quadrature(rate):
    for t in (0.3, 1.0, 2.7, 6.0):
        brk = [b for b in getattr(rate, "breaks", ()) if b < t]
        oracle, _ = integrate.quad(lambda s: float(rate.rate(s)), 0.0, t, points=brk or None, epsabs=1e-13)
        assert_allclose(rate.integrate(t), oracle, rtol=1e-11, atol=1e-13)


@pytest.mark.parametrize("rate", RATES, ids=lambda r: repr(r))
def test_round_trip_and_monotone(rate):
    t = np.linspace(0.0, 8.0, 401)
    y = rate.integrate(t)
    assert np.all(np.diff(y) >= 0)
    # the generalized inverse picks the left end of flat stretches
    back = rate.integrate(rate.inverse_integrated(y))
    assert_allclose(back, y, rtol=1e-12, atol=1e-14)
    assert np.all(rate.inverse_integrated(y) <= t + 1e-12)


def test_flat_stretch_inverse_is_leftmost():
    r = PiecewiseConstantRate((0.5, 2.0), (1.0, 0.0, 0.6))
    assert r.inverse_integrated(0.5) == 0.5


def test_exhausted_inverse_is_inf():
    r = PiecewiseConstantRate((1.0,), (0.3, 0.0))
    assert r.total == pytest.approx(0.3)
    assert r.inverse_integrated(0.31) == np.inf
    assert r.integrate(50.0) == pytest.approx(0.3)


@pytest.mark.parametrize("bad", [-1.0, np.nan, -np.inf])
def test_negative_or_nan_time_rejected(bad):
    with pytest.raises(DomainError):
        ConstantRate(1.0).integrate(bad)


def test_negative_level_rejected():
    with pytest.raises(DomainError):
        LinearRate(0.1, 4.0).inverse_integrated(-0.5)


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "constant", "level": -1},
        {"kind": "linear", "a": 0, "b": 0},
        {"kind": "linear", "a": -1, "b": 2},
        {"kind": "piecewise", "breaks": [1, 1], "levels": [1, 2, 3]},
        {"kind": "piecewise", "breaks": [1], "levels": [1]},
        {"kind": "constant", "level": 1, "extra": 2},
        {"kind": "cubic"},
    ],
)
def test_invalid_configs_rejected(doc):
    with pytest.raises(ConfigurationError):
        rate_from_dict(doc)


@pytest.mark.parametrize("rate", RATES, ids=lambda r: repr(r))
def test_dict_round_trip(rate):
    assert rate_from_dict(rate.to_dict()) == rate


@settings(max_examples=200, deadline=None)
@given(
    a=st.just(0.0) | st.floats(1e-8, 50.0),
    b=st.just(0.0) | st.floats(1e-8, 50.0),
    y=st.floats(0.0, 1e6),
)
def test_linear_inverse_property(a, b, y):
    if a == 0 and b == 0:
        return
    r = LinearRate(a, b)
    t = r.inverse_integrated(y)
    assert t >= 0
    assert_allclose(r.integrate(t), y, rtol=1e-10, atol=1e-12)
