"""First-to-default swap valuation with a Sibuya dependence structure.

The first-to-default survival curve is the copula evaluated at the market
marginal survival curves.  With a flat CDS curve ``exp(-l t)`` and constant
model rates, that curve is ``exp(-beta l t)`` and everything is closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import ConfigurationError, DomainError, NotAvailableError, NumericError
from .model import ReducedParams, SibuyaModel, copula, copula_diagonal, reduced_params
from .rates import RateFunction

__all__ = [
    "PricingInputs",
    "beta_exponent",
    "ftd_fair_spread",
    "ftd_present_value",
    "ftd_legs",
    "level_curve",
    "mc_break_even_spread",
]

QUAD_EPSABS = 1e-10
LEVEL_RTOL = 1e-10


@dataclass(frozen=True)
class PricingInputs:
    """Contract and market data, per unit notional.

    ``cds_intensity`` is the flat hazard of the common marginal survival
    curve; ``marginals`` optionally overrides it with one hazard curve per
    entity.  ``spread`` is only needed for present values.
    """

    cds_intensity: float
    recovery: float
    rate: float
    maturity: float
    spread: float | None = None
    marginals: tuple[RateFunction, ...] | None = None

    def __post_init__(self):
        if not self.cds_intensity > 0:
            raise DomainError(f"cds_intensity must be > 0, got {self.cds_intensity}")
        if not 0 <= self.recovery < 1:
            raise DomainError(f"recovery must lie in [0, 1), got {self.recovery}")
        if not self.rate >= 0:
            raise DomainError(f"rate must be >= 0, got {self.rate}")
        if not (self.maturity > 0 and math.isfinite(self.maturity)):
            raise DomainError(f"maturity must be positive and finite, got {self.maturity}")
        if self.spread is not None and not self.spread >= 0:
            raise DomainError(f"spread must be >= 0, got {self.spread}")

    @property
    def lgd(self) -> float:
        return 1.0 - self.recovery


def beta_exponent(params) -> float:
    """Exponent of the power-function diagonal; lies in ``[1, d]``."""
    p = params if isinstance(params, ReducedParams) else reduced_params(params)
    return p.beta


def _is_flat(model: SibuyaModel, inputs: PricingInputs) -> bool:
    return inputs.marginals is None and model.has_constant_rates


def _first_default_survival(model: SibuyaModel, inputs: PricingInputs):
    if inputs.marginals is None:
        return lambda t: copula_diagonal(model, math.exp(-inputs.cds_intensity * t))
    if len(inputs.marginals) != model.d:
        raise ConfigurationError(f"need {model.d} marginal curves, got {len(inputs.marginals)}")
    curves = inputs.marginals
    return lambda t: copula(model, [math.exp(-c.integrate(t)) for c in curves])


def ftd_legs(model: SibuyaModel, inputs: PricingInputs, method: str = "auto") -> tuple[float, float]:
    """Return ``(D(T), integral_0^T D(t) exp(-r t) dt)`` with ``D`` the first-to-default survival.

    ``method="closed"`` needs constant rates and a flat curve;
    ``"quadrature"`` always integrates numerically.
    """
    r, T = inputs.rate, inputs.maturity
    if method == "auto":
        method = "closed" if _is_flat(model, inputs) else "quadrature"
    if method == "closed":
        if not _is_flat(model, inputs):
            raise NotAvailableError("closed-form legs need constant rates and a flat CDS curve")
        k = beta_exponent(model) * inputs.cds_intensity + r
        annuity = -math.expm1(-k * T) / k if k > 0 else T
        return math.exp(-beta_exponent(model) * inputs.cds_intensity * T), annuity
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    surv = _first_default_survival(model, inputs)
    value, err, info = integrate.quad(
        lambda t: surv(t) * math.exp(-r * t), 0.0, T, epsabs=QUAD_EPSABS, epsrel=1e-12, limit=200, full_output=1
    )[:3]
    if err > 10 * QUAD_EPSABS and err > 1e-12 * abs(value):
        raise NumericError(f"quadrature did not converge: estimate {value:.6g}, error {err:.3g}, {info['neval']} evaluations")
    return float(surv(T)), float(value)


def ftd_present_value(model: SibuyaModel, inputs: PricingInputs, method: str = "auto") -> float:
    """Protection buyer's value: default leg minus premium leg.

    ``(1-R)(1 - e^{-rT} D(T)) - ((1-R) r + s) * integral_0^T D(t) e^{-rt} dt``
    """
    if inputs.spread is None:
        raise DomainError("present value needs a spread")
    d_T, annuity = ftd_legs(model, inputs, method)
    return inputs.lgd * (1.0 - math.exp(-inputs.rate * inputs.maturity) * d_T) - (
        inputs.lgd * inputs.rate + inputs.spread
    ) * annuity


def ftd_fair_spread(model: SibuyaModel, inputs: PricingInputs, method: str = "auto") -> float:
    """Spread that sets the present value to zero.

    ``(1 - R) beta l`` for constant rates with a flat curve; otherwise the
    root of the present value, which is affine in the spread.
    """
    if method == "auto" and _is_flat(model, inputs):
        return inputs.lgd * beta_exponent(model) * inputs.cds_intensity
    d_T, annuity = ftd_legs(model, inputs, "quadrature" if method == "auto" else method)
    r, T = inputs.rate, inputs.maturity
    return inputs.lgd * ((1.0 - math.exp(-r * T) * d_T) / annuity - r)


def _spread(mu: Sequence[float], H: float, lam: float, inputs: PricingInputs) -> float:
    return inputs.lgd * ReducedParams(tuple(mu), lam, H).beta * inputs.cds_intensity


def level_curve(
    mu: Sequence[float],
    inputs: PricingInputs,
    target: float,
    H_grid: Sequence[float],
) -> list[tuple[float, float]]:
    """Jump intensities ``lam(H)`` giving the fair spread ``target`` along ``H_grid``.

    For ``H > 0`` the spread falls strictly as ``lam`` grows, from the
    independence value ``(1-R) d l`` towards a floor above ``(1-R) l``.
    Where the floor for a given ``H`` is still above ``target`` the entry is
    ``nan``.
    """
    mu = tuple(float(m) for m in mu)
    d = len(mu)
    lo_s, hi_s = inputs.lgd * inputs.cds_intensity, inputs.lgd * d * inputs.cds_intensity
    if not lo_s < target < hi_s:
        raise DomainError(f"target spread {target} outside the attainable range ({lo_s}, {hi_s})")

    def solve(H: float) -> float:
        if not H > 0:
            raise DomainError(f"H grid must be positive, got {H}")
        f = lambda lam: _spread(mu, H, lam, inputs) - target  # noqa: E731
        hi = 1.0
        while f(hi) > 0:
            hi *= 2.0
            if hi > 1e12:
                return math.nan
        return optimize.brentq(f, 0.0, hi, xtol=1e-300, rtol=LEVEL_RTOL, maxiter=500)

    return [(float(H), float(solve(float(H)))) for H in H_grid]


def mc_break_even_spread(
    model: SibuyaModel, inputs: PricingInputs, n: int, seed: int, threads: int | None = None
) -> tuple[float, float]:
    """Monte Carlo break-even spread and its delta-method standard error.

    Copula variates are mapped to default times on the flat CDS curve; the
    spread is the ratio of the mean discounted loss to the mean risky
    annuity.
    """
    from .sampling import sample

    batch = sample(model, n, seed, threads)
    tau = -np.log(batch.uniforms) / inputs.cds_intensity
    first = tau.min(axis=1)
    r, T = inputs.rate, inputs.maturity
    loss = inputs.lgd * np.exp(-r * first) * (first <= T)
    stop = np.minimum(first, T)
    annuity = -np.expm1(-r * stop) / r if r > 0 else stop
    s = loss.mean() / annuity.mean()
    se = np.std(loss - s * annuity, ddof=1) / (math.sqrt(n) * annuity.mean())
    return float(s), float(se)
