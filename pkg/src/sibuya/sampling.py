"""Exact simulation of default times and copula variates.

Each row walks the jump occurrences (unit-rate exponential gaps pushed
through the inverse integrated intensity) and resolves every entity either
at a jump that kills it or by inverting its drift between two jumps.

Rows are processed in fixed-size chunks; every random number is addressed by
``(seed, sector, row, draw)`` through :class:`~sibuya.rng.RowStreams`, so
output does not depend on the number of worker threads.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import DomainError, NumericError
from .model import SibuyaModel, marginal_survival
from .rng import RowStreams, ScalarStream

__all__ = [
    "SampleBatch",
    "sample",
    "sample_hierarchical",
    "sample_row",
    "empirical_copula",
    "simultaneous_default_rate",
    "model_fingerprint",
    "default_threads",
]

CHUNK_ROWS = 1 << 16
TRIGGER_LANE = 0
JUMP_LANE = 1
THREADS_ENV = "SIBUYA_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def model_fingerprint(config: Any) -> str:
    """SHA-256 of the canonical JSON form of a model config."""
    if hasattr(config, "to_dict"):
        config = config.to_dict()
    elif isinstance(config, (list, tuple)):
        config = {"sectors": [m.to_dict() for m in config]}
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class SampleBatch:
    """``n`` simulated rows: copula variates ``S_i(tau_i)`` and default times."""

    uniforms: np.ndarray
    default_times: np.ndarray
    seed: int
    fingerprint: str

    @property
    def n(self) -> int:
        return self.uniforms.shape[0]

    @property
    def d(self) -> int:
        return self.uniforms.shape[1]

    def to_csv(self, path) -> None:
        """Write ``u_1..u_d,tau_1..tau_d`` with 17 significant digits plus a JSON sidecar."""
        path = Path(path)
        header = ",".join([f"u_{i + 1}" for i in range(self.d)] + [f"tau_{i + 1}" for i in range(self.d)])
        data = np.hstack([self.uniforms, self.default_times])
        with open(path, "w", newline="\n") as fh:
            np.savetxt(fh, data, fmt="%.17g", delimiter=",", header=header, comments="")
        meta = {"n": self.n, "d": self.d, "seed": self.seed, "model_hash": self.fingerprint}
        Path(str(path) + ".json").write_text(json.dumps(meta, indent=2) + "\n")


def _draw_triggers(model: SibuyaModel, streams: RowStreams, rows: np.ndarray) -> np.ndarray:
    d = model.d
    if model.triggers.kind == "frechet-mixture":
        w = streams.uniforms(rows, d + 2)
        coin, shared = w[:, d], w[:, d + 1]
        return np.where((coin < model.alpha)[:, None], shared[:, None], w[:, :d])
    return streams.uniforms(rows, d)


def _walk(model: SibuyaModel, y: np.ndarray, jumps: RowStreams, rows: np.ndarray) -> np.ndarray:
    """Default times for hazard thresholds ``y = -log U`` (shape ``(m, d)``)."""
    m, d = y.shape
    H = model.jump.H
    drifts = model.drifts
    tau = np.full((m, d), np.nan)
    if H == 0 or model.jump.intensity.total == 0:
        for i in range(d):
            tau[:, i] = drifts[i]._inverse(y[:, i])
        return tau

    active = np.arange(m)
    unit_time = np.zeros(m)
    t_prev = np.zeros(m)
    block = None
    k = 0
    while active.size:
        k += 1
        if (k - 1) % 4 == 0:
            block = jumps.block(rows[active], (k - 1) // 4)
        gap = -np.log1p(-block[:, (k - 1) % 4])
        unit_time[active] += gap
        t_k = model.jump.intensity._inverse(unit_time[active])
        exhausted = np.isinf(t_k)
        j_prev = H * (k - 1)
        undecided = np.isnan(tau[active])
        for i in range(d):
            yi = y[active, i]
            with np.errstate(invalid="ignore"):
                m_k = drifts[i]._integrate(t_k)
            hit = undecided[:, i] & ((yi <= m_k + H * k) | exhausted)
            killed = hit & ~exhausted & (yi >= m_k + j_prev)
            between = hit & ~killed
            out = np.where(killed, t_k, np.nan)
            if np.any(between):
                t_in = drifts[i]._inverse(np.maximum(yi[between] - j_prev, 0.0))
                if np.any(np.isinf(t_in)):
                    raise NumericError(f"entity {i}: bounded drift after the jump intensity is exhausted")
                out[between] = np.clip(t_in, t_prev[active][between], t_k[between])
            rows_i = active[hit]
            tau[rows_i, i] = out[hit]
        t_prev[active] = t_k
        still = np.any(np.isnan(tau[active]), axis=1)
        active = active[still]
        block = block[still]
    return tau


def _sample_chunk(model: SibuyaModel, seed: int, stream: int, start: int, stop: int):
    rows = np.arange(start, stop, dtype=np.uint64)
    u = _draw_triggers(model, RowStreams(seed, stream, TRIGGER_LANE), rows)
    tau = _walk(model, -np.log(u), RowStreams(seed, stream, JUMP_LANE), rows)
    unif = np.stack([np.asarray(marginal_survival(model, i, tau[:, i])) for i in range(model.d)], axis=1)
    return unif, tau


def _sample_arrays(model: SibuyaModel, n: int, seed: int, stream: int, threads: int | None):
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    threads = threads or default_threads()
    bounds = [(s, min(s + CHUNK_ROWS, n)) for s in range(0, n, CHUNK_ROWS)]
    if threads == 1 or len(bounds) == 1:
        parts = [_sample_chunk(model, seed, stream, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ab: _sample_chunk(model, seed, stream, *ab), bounds))
    return np.vstack([p[0] for p in parts]), np.vstack([p[1] for p in parts])


def sample(model: SibuyaModel, n: int, seed: int, threads: int | None = None) -> SampleBatch:
    """Draw ``n`` rows of default times and copula variates.

    Identical ``(model, n, seed)`` give bit-identical batches for any
    ``threads``.
    """
    unif, tau = _sample_arrays(model, n, seed, 0, threads)
    return SampleBatch(unif, tau, int(seed), model_fingerprint(model))


def sample_hierarchical(models: Sequence[SibuyaModel], n: int, seed: int, threads: int | None = None) -> SampleBatch:
    """Independent sectors, each with its own jump path and triggers; columns grouped by sector.

    Sector ``j`` uses random stream ``j``, so a single sector reproduces
    :func:`sample` exactly.
    """
    parts = [_sample_arrays(m, n, seed, j, threads) for j, m in enumerate(models)]
    return SampleBatch(
        np.hstack([p[0] for p in parts]),
        np.hstack([p[1] for p in parts]),
        int(seed),
        model_fingerprint(list(models)),
    )


def sample_row(model: SibuyaModel, seed: int, row: int, stream: int = 0) -> np.ndarray:
    """Default times of one row, walked one occurrence at a time.

    Draws the same random numbers as :func:`sample` for that row; it exists
    as a literal reference for the vectorized walk.
    """
    trig = ScalarStream(RowStreams(seed, stream, TRIGGER_LANE), row)
    d, H = model.d, model.jump.H
    if model.triggers.kind == "frechet-mixture":
        w = [trig.random() for _ in range(d + 2)]
        u = [w[d + 1]] * d if w[d] < model.alpha else w[:d]
    else:
        u = [trig.random() for _ in range(d)]
    y = [-math.log(x) for x in u]
    tau = [math.nan] * d
    remaining = list(range(d))

    def drift_inverse(i, level):
        return float(model.drifts[i]._inverse(np.asarray(max(level, 0.0))))

    if H == 0 or model.jump.intensity.total == 0:
        return np.array([drift_inverse(i, y[i]) for i in range(d)])

    jump_rng = ScalarStream(RowStreams(seed, stream, JUMP_LANE), row)
    k = 0
    t_prev = 0.0
    for t_k in model.jump.sample_occurrences(jump_rng):
        k += 1
        for i in list(remaining):
            m_k = float(model.drifts[i]._integrate(np.asarray(t_k)))
            if y[i] <= m_k + H * k:
                if y[i] >= m_k + H * (k - 1):
                    tau[i] = t_k
                else:
                    tau[i] = min(max(drift_inverse(i, y[i] - H * (k - 1)), t_prev), t_k)
                remaining.remove(i)
        if not remaining:
            break
        t_prev = t_k
    for i in remaining:
        tau[i] = drift_inverse(i, y[i] - H * k)
        if math.isinf(tau[i]):
            raise NumericError(f"entity {i}: bounded drift after the jump intensity is exhausted")
    return np.array(tau)


def empirical_copula(batch: SampleBatch, u) -> tuple[float | np.ndarray, float | np.ndarray]:
    """Fraction of rows with ``uniforms <= u`` and its binomial standard error."""
    u = np.asarray(u, dtype=float)
    pts = u.reshape(-1, batch.d)
    p = np.array([np.mean(np.all(batch.uniforms <= pt, axis=1)) for pt in pts])
    se = np.sqrt(p * (1.0 - p) / batch.n)
    if u.ndim == 1:
        return float(p[0]), float(se[0])
    return p.reshape(u.shape[:-1]), se.reshape(u.shape[:-1])


def simultaneous_default_rate(batch: SampleBatch) -> float:
    """Fraction of rows in which both entities default at the same instant."""
    if batch.d != 2:
        raise DomainError("simultaneous default rate is defined for d = 2")
    return float(np.mean(batch.default_times[:, 0] == batch.default_times[:, 1]))
