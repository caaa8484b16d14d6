"""Deterministic non-negative rate functions.

A rate function ``lam(s)`` is described by its closed-form integral
``Lam(t) = int_0^t lam(s) ds`` and the generalized inverse
``Lam^-(y) = inf{t >= 0 : Lam(t) >= y}``.  Three kinds are supported:

* :class:`ConstantRate` -- ``lam(s) = c``
* :class:`LinearRate` -- ``lam(s) = a s + b``
* :class:`PiecewiseConstantRate` -- flat segments between breakpoints

All evaluation methods accept scalars or numpy arrays and return the same
shape.  When ``y`` exceeds the total mass ``Lam(inf)`` (possible only for a
piecewise curve ending at level zero, or the zero constant) the inverse
returns ``inf``: the infimum over an empty set, which callers read as "the
next occurrence never happens".
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = [
    "RateFunction",
    "ConstantRate",
    "LinearRate",
    "PiecewiseConstantRate",
    "rate_from_dict",
]


def _unwrap(x: np.ndarray, like) -> float | np.ndarray:
    if np.ndim(like) == 0:
        return float(x)
    return x


def _check_times(t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"time must be finite and non-negative, got {t!r}")
    return arr


def _check_levels(y) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"integrated level must be non-negative, got {y!r}")
    return arr


class RateFunction(ABC):
    """Interface shared by all rate kinds."""

    kind: ClassVar[str]

    def rate(self, s):
        """Instantaneous rate at time(s) ``s``."""
        s_arr = _check_times(s)
        return _unwrap(self._rate(s_arr), s)

    def integrate(self, t):
        """Exact integral of the rate over ``[0, t]``."""
        t_arr = _check_times(t)
        return _unwrap(self._integrate(t_arr), t)

    def inverse_integrated(self, y):
        """Generalized inverse ``inf{t >= 0 : integrate(t) >= y}``.

        Returns ``inf`` where ``y`` exceeds the total integrated mass.
        """
        y_arr = _check_levels(y)
        return _unwrap(self._inverse(y_arr), y)

    @property
    @abstractmethod
    def total(self) -> float:
        """``Lam(inf)``; ``inf`` for unbounded curves."""

    @property
    @abstractmethod
    def scale(self) -> float:
        """Characteristic rate level, used to pick validation horizons."""

    @property
    def is_constant(self) -> bool:
        return False

    def linear_coefficients(self) -> tuple[float, float] | None:
        """``(a, b)`` with ``lam(s) = a s + b``, or None if not affine."""
        return None

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        ...

    # vectorized kernels; no validation, ``inf`` passes through
    @abstractmethod
    def _rate(self, s: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _integrate(self, t: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _inverse(self, y: np.ndarray) -> np.ndarray:
        ...


@dataclass(frozen=True)
class ConstantRate(RateFunction):
    level: float

    kind: ClassVar[str] = "constant"

    def __post_init__(self):
        level = float(self.level)
        if not np.isfinite(level) or level < 0:
            raise ConfigurationError(f"constant rate level must be finite and >= 0, got {self.level}")
        object.__setattr__(self, "level", level)

    @property
    def total(self) -> float:
        return np.inf if self.level > 0 else 0.0

    @property
    def scale(self) -> float:
        return self.level

    @property
    def is_constant(self) -> bool:
        return True

    def linear_coefficients(self):
        return 0.0, self.level

    def to_dict(self):
        return {"kind": self.kind, "level": self.level}

    def _rate(self, s):
        return np.full_like(s, self.level, dtype=float)

    def _integrate(self, t):
        if self.level == 0:
            return np.zeros_like(t, dtype=float)
        return self.level * t

    def _inverse(self, y):
        if self.level == 0:
            return np.where(y > 0, np.inf, 0.0)
        return y / self.level


@dataclass(frozen=True)
class LinearRate(RateFunction):
    """``lam(s) = a s + b`` with ``a, b >= 0`` not both zero."""

    a: float
    b: float

    kind: ClassVar[str] = "linear"

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (np.isfinite(a) and np.isfinite(b)) or a < 0 or b < 0:
            raise ConfigurationError(f"linear rate needs finite a, b >= 0, got a={self.a}, b={self.b}")
        if a == 0 and b == 0:
            raise ConfigurationError("linear rate needs a and b not both zero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def total(self) -> float:
        return np.inf

    @property
    def scale(self) -> float:
        return max(self.a, self.b)

    @property
    def is_constant(self) -> bool:
        return self.a == 0

    def linear_coefficients(self):
        return self.a, self.b

    def to_dict(self):
        return {"kind": self.kind, "a": self.a, "b": self.b}

    def _rate(self, s):
        return self.a * s + self.b

    def _integrate(self, t):
        with np.errstate(invalid="ignore"):
            out = 0.5 * self.a * t * t + self.b * t
        return np.where(np.isinf(t), np.inf, out)

    def _inverse(self, y):
        return quadratic_inverse(self.a, self.b, y)


def quadratic_inverse(a: float, b: float, y: np.ndarray) -> np.ndarray:
    """Non-negative root of ``a t^2 / 2 + b t = y``.

    Uses ``2y / (b + sqrt(b^2 + 2ay))``, which equals the textbook
    ``(sqrt(b^2 + 2ay) - b) / a`` but does not cancel for small ``a y``.
    """
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # hypot keeps sqrt(b^2 + 2ay) accurate when b^2 under- or overflows
        t = 2.0 * y / (b + np.hypot(b, np.sqrt(2.0 * a * y)))
    t = np.where(y == 0, 0.0, t)
    return np.where(np.isinf(y), np.inf, t)


@dataclass(frozen=True)
class PiecewiseConstantRate(RateFunction):
    """Flat rate segments.

    ``levels[0]`` applies on ``[0, breaks[0])``, ``levels[j]`` on
    ``[breaks[j-1], breaks[j])`` and ``levels[-1]`` from ``breaks[-1]`` on.
    """

    breaks: tuple[float, ...]
    levels: tuple[float, ...]

    kind: ClassVar[str] = "piecewise"

    def __post_init__(self):
        breaks = tuple(float(x) for x in self.breaks)
        levels = tuple(float(x) for x in self.levels)
        if len(levels) != len(breaks) + 1:
            raise ConfigurationError("piecewise rate needs len(levels) == len(breaks) + 1")
        b = np.asarray(breaks)
        lv = np.asarray(levels)
        if not np.all(np.isfinite(b)) or (len(b) and b[0] <= 0) or np.any(np.diff(b) <= 0):
            raise ConfigurationError("piecewise breakpoints must be finite, positive and strictly increasing")
        if not np.all(np.isfinite(lv)) or np.any(lv < 0):
            raise ConfigurationError("piecewise levels must be finite and >= 0")
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "levels", levels)
        knots = np.concatenate([[0.0], b])
        cum = np.concatenate([[0.0], np.cumsum(lv[:-1] * np.diff(knots))])
        object.__setattr__(self, "_knots", knots)
        object.__setattr__(self, "_cum", cum)

    @property
    def total(self) -> float:
        return np.inf if self.levels[-1] > 0 else float(self._cum[-1])

    @property
    def scale(self) -> float:
        return max(self.levels)

    @property
    def is_constant(self) -> bool:
        return len(set(self.levels)) == 1

    def linear_coefficients(self):
        if self.is_constant:
            return 0.0, self.levels[0]
        return None

    def to_dict(self):
        return {"kind": self.kind, "breaks": list(self.breaks), "levels": list(self.levels)}

    def _segment(self, t):
        return np.searchsorted(self._knots, t, side="right") - 1

    def _rate(self, s):
        return np.asarray(self.levels)[self._segment(s)]

    def _integrate(self, t):
        idx = self._segment(t)
        lv = np.asarray(self.levels)[idx]
        dt = t - self._knots[idx]
        with np.errstate(invalid="ignore"):
            out = self._cum[idx] + lv * dt
        # inf * 0 for a terminal zero level
        return np.where(np.isnan(out), self._cum[-1], out)

    def _inverse(self, y):
        lv = np.asarray(self.levels)
        k = np.searchsorted(self._cum, y, side="left")
        out = np.empty_like(y, dtype=float)
        inside = k < len(self._cum)
        hit = np.zeros_like(inside)
        hit[inside] = self._cum[k[inside]] == y[inside]
        out[hit] = self._knots[k[hit]]
        mid = inside & ~hit
        j = k[mid] - 1
        out[mid] = self._knots[j] + (y[mid] - self._cum[j]) / lv[j]
        beyond = ~inside
        if lv[-1] > 0:
            out[beyond] = self._knots[-1] + (y[beyond] - self._cum[-1]) / lv[-1]
        else:
            out[beyond] = np.inf
        return out


def rate_from_dict(spec: dict[str, Any]) -> RateFunction:
    """Build a rate function from its JSON fragment."""
    if not isinstance(spec, dict):
        raise ConfigurationError(f"rate spec must be an object, got {type(spec).__name__}")
    kind = spec.get("kind")
    fields = {
        "constant": ({"level"}, lambda s: ConstantRate(s["level"])),
        "linear": ({"a", "b"}, lambda s: LinearRate(s["a"], s["b"])),
        "piecewise": ({"breaks", "levels"}, lambda s: PiecewiseConstantRate(tuple(s["breaks"]), tuple(s["levels"]))),
    }
    if kind not in fields:
        raise ConfigurationError(f"unknown rate kind {kind!r}")
    expected, build = fields[kind]
    keys = set(spec) - {"kind"}
    if keys != expected:
        raise ConfigurationError(f"{kind} rate expects fields {sorted(expected)}, got {sorted(keys)}")
    try:
        return build(spec)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"invalid {kind} rate: {exc}") from exc
