"""Shared model fixtures."""
import numpy as np
import pytest

from sibuya import (
    ConstantRate,
    JumpModel,
    LinearRate,
    PiecewiseConstantRate,
    SibuyaModel,
    TriggerDependence,
)


def constant_model(mu, lam, H, alpha=None):
    triggers = TriggerDependence() if alpha is None else TriggerDependence("frechet-mixture", alpha)
    return SibuyaModel(tuple(ConstantRate(m) for m in mu), JumpModel(H, ConstantRate(lam)), triggers)


def a2_model():
    """Bivariate constant-rate reference model."""
    return constant_model((0.05, 0.10), 0.5, 1.0)


def linear_model(b=(5.0, 0.0)):
    """Linear rates with a large jump; ``b=(0, 0)`` gives the strongly dependent variant."""
    drifts = (LinearRate(1.0, b[0]), LinearRate(100.0, b[1]))
    return SibuyaModel(drifts, JumpModel(10.0, LinearRate(0.1, 4.0)))


def piecewise_model():
    drifts = (
        PiecewiseConstantRate((1.0, 3.0), (0.2, 0.05, 0.3)),
        PiecewiseConstantRate((2.0,), (0.1, 0.4)),
        ConstantRate(0.15),
    )
    jump = JumpModel(0.7, PiecewiseConstantRate((0.5, 2.5), (1.0, 0.2, 0.6)))
    return SibuyaModel(drifts, jump)


@pytest.fixture
def a2():
    return a2_model()


@pytest.fixture
def lin():
    return linear_model()


@pytest.fixture
def lin0():
    return linear_model((0.0, 0.0))


@pytest.fixture
def pw3():
    return piecewise_model()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
