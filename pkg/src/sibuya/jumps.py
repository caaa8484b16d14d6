"""Common jump process ``J_t = H * N_t`` driven by a non-homogeneous Poisson process.

Dependents only use two things: the Laplace-Stieltjes transform of an
increment and a lazy stream of occurrence times.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterator

import numpy as np

from .errors import ConfigurationError, DomainError
from .rates import RateFunction, rate_from_dict

__all__ = ["JumpModel", "jump_from_dict"]


@dataclass(frozen=True)
class JumpModel:
    """Scaled Poisson jump process.

    Parameters
    ----------
    H : float
        Jump size, ``H >= 0``.
    intensity : RateFunction
        Poisson rate ``lam(s)``; its integral is the expected jump count.
    """

    H: float
    intensity: RateFunction

    def __post_init__(self):
        H = float(self.H)
        if not math.isfinite(H) or H < 0:
            raise ConfigurationError(f"jump size H must be finite and >= 0, got {self.H}")
        object.__setattr__(self, "H", H)

    @property
    def shock(self) -> float:
        """``1 - exp(-H)``: the LST exponent per unit of intensity at argument 1."""
        return -math.expm1(-self.H)

    def lst_increment(self, s, t, x):
        """LST of ``J_t - J_s`` at ``x``: ``exp(-(Lam(t) - Lam(s)) (1 - exp(-x H)))``."""
        s_a = np.asarray(s, dtype=float)
        t_a = np.asarray(t, dtype=float)
        x_a = np.asarray(x, dtype=float)
        if np.any(s_a < 0) or np.any(s_a > t_a) or np.any(x_a < 0) or np.any(np.isnan(t_a)):
            raise DomainError("lst_increment needs 0 <= s <= t and x >= 0")
        out = self._lst_increment(s_a, t_a, x_a)
        return float(out) if out.ndim == 0 else out

    def _lst_increment(self, s, t, x):
        lam = self.intensity
        dlam = lam._integrate(t) - lam._integrate(s)
        with np.errstate(invalid="ignore"):
            expo = dlam * -np.expm1(-x * self.H)
        # zero-length increments or zero argument: factor exactly 1
        expo = np.where((t == s) | (x == 0) | (self.H == 0), 0.0, expo)
        return np.exp(-expo)

    def sample_occurrences(
        self,
        rng,
        stop: Callable[[int, float], bool] | None = None,
    ) -> Iterator[float]:
        """Lazily yield the occurrence times ``t_1 < t_2 < ...``.

        Unit-rate exponential gaps (by inversion of ``rng.random()``) are
        accumulated and mapped through the inverse integrated intensity.
        The stream ends when ``stop(k, t_k)`` is true (that occurrence is not
        yielded) or the intensity has no mass left.

        Parameters
        ----------
        rng
            Any object with a ``random()`` method returning uniforms in
            ``[0, 1)``, e.g. :class:`numpy.random.Generator`.
        stop
            Predicate on the 1-based occurrence index and time.
        """
        unit_time = 0.0
        k = 0
        while True:
            unit_time += -math.log1p(-rng.random())
            t = float(self.intensity._inverse(np.asarray(unit_time)))
            if math.isinf(t):
                return
            k += 1
            if stop is not None and stop(k, t):
                return
            yield t

    def to_dict(self) -> dict[str, Any]:
        return {"H": self.H, "intensity": self.intensity.to_dict()}


def jump_from_dict(spec: dict[str, Any]) -> JumpModel:
    if not isinstance(spec, dict) or set(spec) != {"H", "intensity"}:
        raise ConfigurationError("jump spec expects exactly the fields ['H', 'intensity']")
    try:
        H = float(spec["H"])
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"jump size H must be a number, got {spec['H']!r}") from exc
    return JumpModel(H, rate_from_dict(spec["intensity"]))
