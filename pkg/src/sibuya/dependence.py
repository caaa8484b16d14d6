"""Dependence measures: orthant ratio, tail and extremal dependence.

Closed forms exist for constant rates.  For other models the coefficients
are defined as limits; :func:`limit_estimate` evaluates the defining
quotient on a geometric grid and extrapolates with an estimated
convergence rate.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NotAvailableError
from .model import (
    ReducedParams,
    SibuyaModel,
    copula,
    copula_diagonal,
    reduced_params,
)

__all__ = [
    "DependenceReport",
    "LimitEstimate",
    "plod_ratio",
    "tail_dependence_analytic",
    "tail_dependence_numeric",
    "extremal_dependence",
    "extremal_dependence_enumerated",
    "extremal_dependence_numeric",
    "survival_copula_diagonal",
    "limit_estimate",
    "dependence_report",
]

EPS_GRID = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
CONVERGENCE_TOL = 1e-2
MAX_SIEVE_DIM = 20


def _params(obj) -> ReducedParams:
    return obj if isinstance(obj, ReducedParams) else reduced_params(obj)


def plod_ratio(model: SibuyaModel, u):
    """``C(u) / prod(u)``; at least one for these copulas."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise DomainError("orthant ratio is undefined when some u_i = 0")
    val = np.asarray(copula(model, u)) / np.prod(u, axis=-1)
    return float(val) if val.ndim == 0 else val


def tail_dependence_analytic(params) -> tuple[float, float]:
    """``(lambda_l, lambda_u) = (0, min(theta_1, theta_2))`` for bivariate constant-rate models."""
    p = _params(params)
    if p.d != 2:
        raise NotAvailableError("tail dependence is defined for d = 2")
    return 0.0, float(np.min(p.theta))


@dataclass(frozen=True)
class LimitEstimate:
    """Extrapolated limit of a difference quotient.

    ``diagnostic`` is the largest step between successive quotients on the
    three finest grid points; ``converged`` is False when it exceeds 1e-2 or
    the quotients do not contract.
    """

    value: float
    diagnostic: float
    converged: bool
    quotients: tuple[float, ...]


def limit_estimate(quotient: Callable[[float], float], grid: Sequence[float] = EPS_GRID) -> LimitEstimate:
    """Estimate ``lim_{eps -> 0} quotient(eps)``, clipped to ``[0, 1]``.

    Richardson extrapolation with the contraction ratio estimated from the
    last three quotients (Aitken's delta-squared step).  Exact whenever the
    error is geometric on the grid, e.g. ``a + b eps`` or ``b eps**p``.
    """
    q = np.array([quotient(e) for e in grid], dtype=float)
    steps = np.abs(np.diff(q[-3:]))
    diagnostic = float(np.max(steps))
    d_last, d_prev = q[-1] - q[-2], q[-2] - q[-3]
    contracting = True
    if d_last == 0:
        value = q[-1]
    elif d_prev != 0 and 0 < d_last / d_prev < 1:
        r = d_last / d_prev
        value = q[-1] + d_last * r / (1.0 - r)
    else:
        value = q[-1]
        contracting = False
    value = float(min(1.0, max(0.0, value)))
    return LimitEstimate(value, diagnostic, contracting and diagnostic <= CONVERGENCE_TOL, tuple(float(x) for x in q))


def _tail_quotients(model: SibuyaModel):
    def lower(eps):
        return copula_diagonal(model, eps) / eps

    def upper(eps):
        u = 1.0 - eps
        # 1 - 2u + C(u, u) = C(u, u) - 1 + 2 eps, formed without cancelling 1 - u
        return (copula_diagonal(model, u) - 1.0 + 2.0 * eps) / eps

    return lower, upper


def tail_dependence_numeric(model: SibuyaModel) -> tuple[LimitEstimate, LimitEstimate]:
    """``(lambda_l, lambda_u)`` as extrapolated limits of the diagonal quotients."""
    if model.d != 2:
        raise NotAvailableError("tail dependence is defined for d = 2")
    lower, upper = _tail_quotients(model)
    return limit_estimate(lower), limit_estimate(upper)


def extremal_dependence(params) -> tuple[float, float]:
    """``(epsilon_l, epsilon_u)`` for a constant-rate model, ``d >= 2``.

    The sieve for the survival diagonal has one power-function term per
    subset ``I``, with exponent the diagonal exponent ``beta_I`` of the
    sub-model on ``I``.  Counting, for each entity, the subsets where it
    sits at each rank, the alternating sum separates and only the entity
    with the largest marginal intensity survives:
    ``epsilon_u = lam (1 - e^-H)^d / (lambda_[1] beta)``.
    """
    p = _params(params)
    if p.d < 2:
        raise DomainError("extremal dependence needs d >= 2")
    eps_u = p.lam * p.shock**p.d / (float(p.lambdas_desc[0]) * p.beta)
    return 0.0, float(eps_u)


def extremal_dependence_enumerated(params) -> float:
    """``epsilon_u`` by literal summation over all ``2^d`` subsets (``d <= 20``)."""
    p = _params(params)
    if p.d < 2:
        raise DomainError("extremal dependence needs d >= 2")
    if p.d > MAX_SIEVE_DIM:
        raise DomainError(f"subset enumeration limited to d <= {MAX_SIEVE_DIM}")
    terms = []
    for k in range(1, p.d + 1):
        for subset in itertools.combinations(range(p.d), k):
            sub = ReducedParams(tuple(p.mu[j] for j in subset), p.lam, p.H)
            terms.append((-1) ** (k + 1) * sub.beta)
    return math.fsum(terms) / p.beta


def survival_copula_diagonal(model: SibuyaModel, u):
    """``C_hat(1-u, ..., 1-u) = sum_I (-1)^|I| C(u^{1_I})`` over all subsets."""
    d = model.d
    if d > MAX_SIEVE_DIM:
        raise DomainError(f"sieve limited to d <= {MAX_SIEVE_DIM}, got {d}")
    u = np.asarray(u, dtype=float)
    if np.any(np.isnan(u)) or np.any(u < 0) or np.any(u > 1):
        raise DomainError("u must lie in [0, 1]")
    masks = np.array(list(itertools.product((0, 1), repeat=d)), dtype=bool)
    signs = np.where(masks.sum(axis=1) % 2, -1.0, 1.0)
    args = np.where(masks, u[..., None, None], 1.0)  # (..., 2^d, d)
    vals = np.asarray(copula(model, args))
    # fsum along the subset axis keeps the alternating sum exact
    flat = (signs * vals).reshape(-1, len(masks))
    out = np.array([math.fsum(row) for row in flat]).reshape(u.shape)
    return float(out) if out.ndim == 0 else out


def extremal_dependence_numeric(model: SibuyaModel) -> tuple[LimitEstimate, LimitEstimate]:
    """``(epsilon_l, epsilon_u)`` as extrapolated limits of their defining ratios."""
    if model.d < 2:
        raise DomainError("extremal dependence needs d >= 2")

    def lower(eps):
        return copula_diagonal(model, eps) / (1.0 - survival_copula_diagonal(model, 1.0 - eps))

    def upper(eps):
        u = 1.0 - eps
        return survival_copula_diagonal(model, u) / (1.0 - copula_diagonal(model, u))

    return limit_estimate(lower), limit_estimate(upper)


@dataclass(frozen=True)
class DependenceReport:
    """Tail and extremal coefficients; None where not available."""

    lambda_lower: float | None
    lambda_upper: float | None
    epsilon_lower: float | None
    epsilon_upper: float | None
    method: str
    converged: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def dependence_report(model: SibuyaModel) -> DependenceReport:
    """Closed forms for constant-rate models without trigger dependence, numeric limits otherwise."""
    analytic = model.has_constant_rates and model.alpha == 0
    if analytic:
        p = reduced_params(model)
        lam_l = lam_u = None
        if model.d == 2:
            lam_l, lam_u = tail_dependence_analytic(p)
        eps_l = eps_u = None
        if model.d >= 2:
            eps_l, eps_u = extremal_dependence(p)
        return DependenceReport(lam_l, lam_u, eps_l, eps_u, "analytic")

    estimates = []
    lam_l = lam_u = eps_l = eps_u = None
    if model.d == 2:
        lo, up = tail_dependence_numeric(model)
        lam_l, lam_u = lo.value, up.value
        estimates += [lo, up]
    if 2 <= model.d <= MAX_SIEVE_DIM:
        lo, up = extremal_dependence_numeric(model)
        eps_l, eps_u = lo.value, up.value
        estimates += [lo, up]
    return DependenceReport(lam_l, lam_u, eps_l, eps_u, "numeric-limit", all(e.converged for e in estimates))
