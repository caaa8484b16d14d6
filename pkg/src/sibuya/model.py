"""The jump-driven default model and its Sibuya copula.

Entity ``i`` defaults at ``tau_i = inf{t : exp(-(M_i(t) + J_t)) <= U_i}``
where ``M_i`` integrates a deterministic drift and ``J`` is the common jump
process.  Everything here is an exact (closed-form or root-found)
evaluation; simulation lives in :mod:`sibuya.sampling`.

Vectorized functions take the coordinate axis last: a copula argument of
shape ``(..., d)`` gives a result of shape ``(...)``.  Entity indices are
0-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, NotAvailableError
from .jumps import JumpModel
from .rates import RateFunction, quadratic_inverse

__all__ = [
    "TriggerDependence",
    "SibuyaModel",
    "ReducedParams",
    "reduced_params",
    "marginal_survival",
    "marginal_hazard",
    "marginal_survival_inverse",
    "joint_survival",
    "joint_survival_jointure",
    "joint_survival_expsum",
    "jointure",
    "copula",
    "copula_diagonal",
    "hierarchical_copula",
    "mixture_copula",
]

PROPERNESS_HORIZON = 1e6
PROPERNESS_TOL = 1e-8
BISECT_MAX_ITER = 200
BISECT_RTOL = 1e-12


@dataclass(frozen=True)
class TriggerDependence:
    """Law of the trigger vector ``U``.

    ``independent`` gives the plain Sibuya model; ``frechet-mixture`` draws
    comonotone triggers with probability ``alpha`` and independent ones
    otherwise.
    """

    kind: str = "independent"
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("independent", "frechet-mixture"):
            raise ConfigurationError(f"unknown trigger dependence {self.kind!r}")
        alpha = float(self.alpha)
        if self.kind == "independent" and alpha != 0:
            raise ConfigurationError("independent triggers take no alpha")
        if not 0 <= alpha <= 1:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        object.__setattr__(self, "alpha", alpha)

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "independent":
            return {"kind": "independent"}
        return {"kind": self.kind, "alpha": self.alpha}


@dataclass(frozen=True)
class SibuyaModel:
    """Default model with per-entity drifts and a shared jump process.

    Construction checks that every marginal survival function decays to
    zero (probed at a horizon of ``1e6 / max rate level``) since the copula
    needs uniform margins.
    """

    drifts: tuple[RateFunction, ...]
    jump: JumpModel
    triggers: TriggerDependence = field(default_factory=TriggerDependence)

    def __post_init__(self):
        drifts = tuple(self.drifts)
        object.__setattr__(self, "drifts", drifts)
        if len(drifts) < 1:
            raise ConfigurationError("a model needs at least one entity")
        if self.triggers.kind == "frechet-mixture" and len(set(drifts)) > 1:
            raise ConfigurationError("frechet-mixture triggers require identical drifts")
        scale = max([r.scale for r in drifts] + [self.jump.intensity.scale if self.jump.H > 0 else 0.0])
        if scale <= 0:
            raise ConfigurationError("model has zero total hazard; survival functions never decay")
        horizon = PROPERNESS_HORIZON / scale
        for i in range(len(drifts)):
            s = float(np.exp(-marginal_hazard(self, i, horizon)))
            if not s < PROPERNESS_TOL:
                raise ConfigurationError(
                    f"entity {i} has bounded total hazard: S_{i}({horizon:g}) = {s:.3g} >= {PROPERNESS_TOL:g}"
                )

    @property
    def d(self) -> int:
        return len(self.drifts)

    @property
    def has_constant_rates(self) -> bool:
        """Constant drifts and constant jump intensity."""
        return self.jump.intensity.is_constant and all(r.is_constant for r in self.drifts)

    @property
    def alpha(self) -> float:
        return self.triggers.alpha

    def to_dict(self) -> dict[str, Any]:
        return {
            "drifts": [r.to_dict() for r in self.drifts],
            "jump": self.jump.to_dict(),
            "triggers": self.triggers.to_dict(),
        }


@dataclass(frozen=True)
class ReducedParams:
    """Scalar summary of a model with constant rates.

    ``mu`` are the drift levels, ``lam`` the jump intensity and ``H`` the
    jump size.
    """

    mu: tuple[float, ...]
    lam: float
    H: float

    def __post_init__(self):
        mu = tuple(float(m) for m in self.mu)
        object.__setattr__(self, "mu", mu)
        if any(m < 0 for m in mu) or self.lam < 0 or self.H < 0:
            raise ConfigurationError("rates and jump size must be non-negative")
        if min(self.lambdas) <= 0:
            raise ConfigurationError("every entity needs a positive total default intensity")

    @property
    def d(self) -> int:
        return len(self.mu)

    @property
    def shock(self) -> float:
        return -math.expm1(-self.H)

    @property
    def c(self) -> float:
        """Jump contribution ``lam (1 - exp(-H))`` to each marginal intensity."""
        return self.lam * self.shock

    @property
    def lambdas(self) -> np.ndarray:
        """Marginal default intensities ``mu_i + c``."""
        return np.asarray(self.mu) + self.c

    @property
    def lambdas_desc(self) -> np.ndarray:
        return np.sort(self.lambdas, kind="stable")[::-1]

    @property
    def theta(self) -> np.ndarray:
        return self.shock**2 * self.lam / self.lambdas

    @property
    def weights(self) -> np.ndarray:
        """``(1 - exp(-H (d - i))) / lambda_[i]`` for ``i = 1..d``."""
        d = self.d
        i = np.arange(1, d + 1)
        return -np.expm1(-self.H * (d - i)) / self.lambdas_desc

    @property
    def beta(self) -> float:
        """Exponent of the power-function diagonal ``C(u, ..., u) = u**beta``."""
        return float(self.d - math.fsum(self.c * self.weights))


def reduced_params(model: SibuyaModel) -> ReducedParams:
    if not model.has_constant_rates:
        raise NotAvailableError("closed forms need constant drifts and constant jump intensity")
    mu = tuple(r.linear_coefficients()[1] for r in model.drifts)
    lam = model.jump.intensity.linear_coefficients()[1]
    return ReducedParams(mu, lam, model.jump.H)


# ---------------------------------------------------------------------------
# margins


def _check_index(model: SibuyaModel, i: int) -> None:
    if not (isinstance(i, (int, np.integer)) and 0 <= i < model.d):
        raise DomainError(f"entity index {i!r} out of range for d={model.d}")


def _log_lst(jump: JumpModel, s, t, x):
    """Log of the increment LST; exact zero for empty increments."""
    lam = jump.intensity
    with np.errstate(invalid="ignore"):
        dlam = lam._integrate(t) - lam._integrate(s)
        out = -dlam * -np.expm1(-np.asarray(x, dtype=float) * jump.H)
    return np.where((np.asarray(t) == np.asarray(s)) | (np.asarray(x) == 0) | (jump.H == 0), 0.0, out)


def marginal_hazard(model: SibuyaModel, i: int, t):
    """``-log S_i(t) = M_i(t) - log LST_{J_t}(1)``."""
    t_a = np.asarray(t, dtype=float)
    out = model.drifts[i]._integrate(t_a) - _log_lst(model.jump, 0.0, t_a, 1.0)
    return float(out) if out.ndim == 0 else out


def marginal_survival(model: SibuyaModel, i: int, t):
    """Marginal survival ``S_i(t) = exp(-M_i(t)) LST_{J_t}(1)``; ``t = inf`` gives 0."""
    _check_index(model, i)
    t_a = np.asarray(t, dtype=float)
    if np.any(np.isnan(t_a)) or np.any(t_a < 0):
        raise DomainError("time must be non-negative")
    out = np.where(np.isinf(t_a), 0.0, np.exp(-np.asarray(marginal_hazard(model, i, t_a))))
    return float(out) if out.ndim == 0 else out


def _affine_hazard(model: SibuyaModel, i: int) -> tuple[float, float] | None:
    drift = model.drifts[i].linear_coefficients()
    lam = model.jump.intensity.linear_coefficients()
    if drift is None or lam is None:
        return None
    shock = model.jump.shock
    return drift[0] + shock * lam[0], drift[1] + shock * lam[1]


def _bisect_hazard(model: SibuyaModel, i: int, y: np.ndarray) -> np.ndarray:
    """Smallest ``t`` with hazard ``>= y``, by doubling then bisection."""
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    todo = (y > 0) & np.isfinite(y)
    out[np.isinf(y)] = np.inf
    if not np.any(todo):
        return out
    yt = y[todo]
    hi = np.ones_like(yt)
    for _ in range(2100):
        low = np.asarray(marginal_hazard(model, i, hi)) < yt
        if not np.any(low):
            break
        hi = np.where(low, 2.0 * hi, hi)
    else:
        raise ConfigurationError(f"hazard of entity {i} never reaches the requested level")
    lo = np.zeros_like(hi)
    for _ in range(BISECT_MAX_ITER):
        if np.all(hi - lo <= BISECT_RTOL * hi):
            break
        mid = 0.5 * (lo + hi)
        above = np.asarray(marginal_hazard(model, i, mid)) >= yt
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    out[todo] = hi
    return out


def hazard_inverse(model: SibuyaModel, i: int, y):
    """Generalized inverse of the marginal hazard: ``inf{t : hazard(t) >= y}``."""
    y = np.asarray(y, dtype=float)
    coeffs = _affine_hazard(model, i)
    if coeffs is not None:
        return quadratic_inverse(coeffs[0], coeffs[1], y)
    return _bisect_hazard(model, i, y)


def marginal_survival_inverse(model: SibuyaModel, i: int, u):
    """Generalized inverse ``inf{t : S_i(t) <= u}``; ``u = 0`` maps to ``inf``.

    Closed form when drift and jump intensity are affine, bracketed
    bisection otherwise.
    """
    _check_index(model, i)
    u_a = np.asarray(u, dtype=float)
    if np.any(np.isnan(u_a)) or np.any(u_a < 0) or np.any(u_a > 1):
        raise DomainError(f"probability must lie in [0, 1], got {u!r}")
    with np.errstate(divide="ignore"):
        y = -np.log(u_a)
    out = np.asarray(hazard_inverse(model, i, y), dtype=float)
    out = np.where(u_a == 1, 0.0, out)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# joint survival, three algebraically equal forms


def _check_vector(model: SibuyaModel, x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] != model.d:
        raise DomainError(f"{name} must have trailing dimension d={model.d}, got shape {x.shape}")
    return x


def _log_dependence(model: SibuyaModel, times: np.ndarray) -> np.ndarray:
    """Log of ``prod_i LST_{J_t(i) - J_t(i-1)}(d-i+1) / LST_{J_t(i)}(1)``.

    ``times`` must be finite, shape ``(..., d)``.
    """
    d = model.d
    ts = np.sort(times, axis=-1, kind="stable")
    prev = np.concatenate([np.zeros_like(ts[..., :1]), ts[..., :-1]], axis=-1)
    args = np.arange(d, 0, -1, dtype=float)
    num = _log_lst(model.jump, prev, ts, args)
    den = _log_lst(model.jump, 0.0, ts, 1.0)
    return np.sum(num - den, axis=-1)


def _log_margins(model: SibuyaModel, times: np.ndarray) -> np.ndarray:
    return sum(np.asarray(marginal_hazard(model, i, times[..., i])) for i in range(model.d))


def _sibuya_survival(model: SibuyaModel, t: np.ndarray) -> np.ndarray:
    finite = np.all(np.isfinite(t), axis=-1)
    tf = np.where(np.isfinite(t), t, 0.0)
    val = np.exp(_log_dependence(model, tf) - _log_margins(model, tf))
    return np.where(finite, val, 0.0)


def joint_survival(model: SibuyaModel, t):
    """``P(tau_1 > t_1, ..., tau_d > t_d)`` from the increment-LST product.

    With Frechet-mixture triggers this is
    ``alpha min_i S_1(t_i) + (1 - alpha) * (independent-trigger value)``.
    """
    t = _check_vector(model, t, "t")
    if np.any(np.isnan(t)) or np.any(t < 0):
        raise DomainError("times must be non-negative")
    val = _sibuya_survival(model, t)
    if model.alpha > 0:
        tmax = np.max(t, axis=-1)
        comon = np.asarray(marginal_survival(model, 0, tmax))
        val = model.alpha * comon + (1.0 - model.alpha) * val
    return float(val) if val.ndim == 0 else val


def jointure(x, y, z):
    """``exp(-z (1 - exp(-x y) - x (1 - exp(-y))))``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(x < 0) or np.any(y < 0) or np.any(z < 0):
        raise DomainError("jointure arguments must be non-negative")
    inner = -np.expm1(-x * y) + x * np.expm1(-y)
    out = np.exp(-z * inner)
    return float(out) if out.ndim == 0 else out


def _integrated_sorted(model: SibuyaModel, t: np.ndarray) -> np.ndarray:
    ts = np.sort(t, axis=-1, kind="stable")
    return model.jump.intensity._integrate(ts)


def joint_survival_jointure(model: SibuyaModel, t):
    """Joint survival as a product of jointure factors times the margins."""
    t = _check_vector(model, t, "t")
    d, H = model.d, model.jump.H
    lam_sorted = _integrated_sorted(model, t)
    prev = np.concatenate([np.zeros_like(lam_sorted[..., :1]), lam_sorted[..., :-1]], axis=-1)
    factors = jointure(np.arange(d, 0, -1, dtype=float), H, lam_sorted - prev)
    margins = np.prod([marginal_survival(model, i, t[..., i]) for i in range(d)], axis=0)
    out = np.prod(factors, axis=-1) * margins
    return float(out) if np.ndim(out) == 0 else out


def joint_survival_expsum(model: SibuyaModel, t):
    """Joint survival as ``exp(shock * sum_i (1 - e^{-H(d-i)}) Lam(t_(i))) * prod S_i``."""
    t = _check_vector(model, t, "t")
    d, H = model.d, model.jump.H
    lam_sorted = _integrated_sorted(model, t)
    w = -np.expm1(-H * (d - np.arange(1, d + 1)))
    margins = np.prod([marginal_survival(model, i, t[..., i]) for i in range(d)], axis=0)
    out = np.exp(model.jump.shock * np.sum(w * lam_sorted, axis=-1)) * margins
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# copula


def _check_unit(model: SibuyaModel, u) -> np.ndarray:
    u = _check_vector(model, u, "u")
    if np.any(np.isnan(u)) or np.any(u < 0) or np.any(u > 1):
        raise DomainError("copula arguments must lie in [0, 1]")
    return u


def _inverse_margins(model: SibuyaModel, u: np.ndarray) -> np.ndarray:
    return np.stack([np.asarray(marginal_survival_inverse(model, i, u[..., i])) for i in range(model.d)], axis=-1)


def _copula_constant_rates(model: SibuyaModel, u: np.ndarray) -> np.ndarray:
    p = reduced_params(model)
    d = model.d
    with np.errstate(divide="ignore"):
        logu = np.log(u)
    zero = np.any(u == 0, axis=-1)
    logu = np.where(np.isinf(logu), 0.0, logu)
    # log of u_j^{-lam / lambda_j}, sorted ascending
    logv = np.sort(-p.lam * logu / p.lambdas, axis=-1, kind="stable")
    w = p.shock * -np.expm1(-p.H * (d - np.arange(1, d + 1)))
    val = np.exp(np.sum(logu, axis=-1) + np.sum(w * logv, axis=-1))
    return np.where(zero, 0.0, val)


def _copula_bivariate(model: SibuyaModel, u: np.ndarray) -> np.ndarray:
    zero = np.any(u == 0, axis=-1)
    times = _inverse_margins(model, np.where(u == 0, 1.0, u))
    tmin = np.min(times, axis=-1)
    val = np.exp(model.jump.shock**2 * model.jump.intensity._integrate(tmin)) * u[..., 0] * u[..., 1]
    return np.where(zero, 0.0, val)


def _copula_composition(model: SibuyaModel, u: np.ndarray) -> np.ndarray:
    zero = np.any(u == 0, axis=-1)
    times = _inverse_margins(model, np.where(u == 0, 1.0, u))
    val = np.exp(_log_dependence(model, times)) * np.prod(u, axis=-1)
    return np.where(zero, 0.0, val)


_METHODS = {
    "constant": _copula_constant_rates,
    "bivariate": _copula_bivariate,
    "composition": _copula_composition,
}


def _sibuya_copula(model: SibuyaModel, u: np.ndarray, method: str) -> np.ndarray:
    if method == "auto" and (model.jump.H == 0 or model.jump.intensity.total == 0):
        return np.prod(u, axis=-1)
    if method == "auto":
        if model.has_constant_rates:
            method = "constant"
        elif model.d == 2:
            method = "bivariate"
        else:
            method = "composition"
    if method not in _METHODS:
        raise ValueError(f"unknown copula method {method!r}")
    if method == "constant" and not model.has_constant_rates:
        raise NotAvailableError("the power form needs constant rates")
    if method == "bivariate" and model.d != 2:
        raise NotAvailableError("the bivariate form needs d = 2")
    return _METHODS[method](model, u)


def copula(model: SibuyaModel, u, method: str = "auto"):
    """Evaluate the model's copula at ``u`` (shape ``(..., d)``).

    ``method`` picks the evaluation route: ``"constant"`` (ordered power
    form, constant rates only), ``"bivariate"`` (``d = 2``), or
    ``"composition"`` (``S(S_1^-(u_1), ..., S_d^-(u_d))`` through increment
    LSTs, always valid).  ``"auto"`` takes the first applicable in that
    order.  Frechet-mixture triggers add the comonotone component.
    """
    u = _check_unit(model, u)
    val = _sibuya_copula(model, u, method)
    if model.alpha > 0:
        val = model.alpha * np.min(u, axis=-1) + (1.0 - model.alpha) * val
    return float(val) if np.ndim(val) == 0 else val


def mixture_copula(model: SibuyaModel, u, method: str = "auto"):
    """``alpha * min(u) + (1 - alpha) * C_Sibuya(u)`` for Frechet-mixture triggers."""
    if model.triggers.kind != "frechet-mixture":
        raise ConfigurationError("mixture_copula needs a frechet-mixture trigger model")
    return copula(model, u, method)


def copula_diagonal(model: SibuyaModel, u, method: str = "auto"):
    """``C(u, ..., u)``; the power function ``u**beta`` under constant rates.

    The general route evaluates
    ``u^d * prod_i LST ratio at the order statistics of S_i^-(u)``.
    """
    u_a = np.asarray(u, dtype=float)
    if np.any(np.isnan(u_a)) or np.any(u_a < 0) or np.any(u_a > 1):
        raise DomainError("diagonal argument must lie in [0, 1]")
    if method == "auto":
        method = "constant" if model.has_constant_rates else "composition"
    if method == "constant":
        val = u_a ** reduced_params(model).beta
    elif method == "composition":
        safe = np.where(u_a == 0, 1.0, u_a)
        times = np.stack([np.asarray(marginal_survival_inverse(model, i, safe)) for i in range(model.d)], axis=-1)
        val = np.where(u_a == 0, 0.0, safe**model.d * np.exp(_log_dependence(model, times)))
    else:
        raise ValueError(f"unknown diagonal method {method!r}")
    if model.alpha > 0:
        val = model.alpha * u_a + (1.0 - model.alpha) * val
    return float(val) if np.ndim(val) == 0 else val


def hierarchical_copula(sectors: Sequence[SibuyaModel], u):
    """Copula of independent sectors: product of each sector's copula on its block."""
    u = np.asarray(u, dtype=float)
    total = sum(m.d for m in sectors)
    if u.ndim == 0 or u.shape[-1] != total:
        raise DomainError(f"u must have trailing dimension {total}, got shape {u.shape}")
    val = np.ones(u.shape[:-1])
    start = 0
    for m in sectors:
        val = val * np.asarray(copula(m, u[..., start : start + m.d]))
        start += m.d
    return float(val) if val.ndim == 0 else val
