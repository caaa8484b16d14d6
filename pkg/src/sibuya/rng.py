"""Counter-based random numbers (Philox4x64-10) evaluated in bulk with numpy.

Every uniform is a pure function of ``(seed, stream, row, draw)``, so a batch
can be split into row chunks and generated in any order or on any number of
threads with bit-identical results.  The block function agrees with
:class:`numpy.random.Philox`; the tests check that word for word.
"""
from __future__ import annotations

import numpy as np

__all__ = ["philox4x64", "RowStreams"]

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_LO32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)
_ROUNDS = 10


def _mulhilo(a: np.uint64, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a0, a1 = a & _LO32, a >> _S32
    b0, b1 = b & _LO32, b >> _S32
    p00 = a0 * b0
    p01 = a0 * b1
    p10 = a1 * b0
    p11 = a1 * b1
    mid = (p00 >> _S32) + (p01 & _LO32) + (p10 & _LO32)
    hi = p11 + (p01 >> _S32) + (p10 >> _S32) + (mid >> _S32)
    return hi, a * b


def philox4x64(counter, key) -> np.ndarray:
    """Apply the Philox4x64-10 bijection.

    Parameters
    ----------
    counter : array_like of uint64, shape (..., 4)
    key : pair of uint64

    Returns
    -------
    ndarray of uint64, shape (..., 4)
    """
    c = np.asarray(counter, dtype=np.uint64)
    r0, r1, r2, r3 = (c[..., i].copy() for i in range(4))
    k0 = np.uint64(key[0])
    k1 = np.uint64(key[1])
    with np.errstate(over="ignore"):
        for i in range(_ROUNDS):
            if i:
                k0 = k0 + _W0
                k1 = k1 + _W1
            hi0, lo0 = _mulhilo(_M0, r0)
            hi1, lo1 = _mulhilo(_M1, r2)
            r0, r1, r2, r3 = hi1 ^ r1 ^ k0, lo1, hi0 ^ r3 ^ k1, lo0
    return np.stack([r0, r1, r2, r3], axis=-1)


def _to_open_unit(words: np.ndarray) -> np.ndarray:
    # midpoint of the 53-bit cell: strictly inside (0, 1)
    return ((words >> _S11).astype(np.float64) + 0.5) * 2.0**-53


class RowStreams:
    """Independent uniform streams, one per sample row.

    Parameters
    ----------
    seed : int
        64-bit seed; forms the first key word.
    stream : int
        Second key word; separates e.g. independent sectors.
    lane : int
        Counter word distinguishing uses within a row (triggers vs jumps).
    """

    def __init__(self, seed: int, stream: int = 0, lane: int = 0):
        self.key = (np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF), np.uint64(int(stream) & 0xFFFFFFFFFFFFFFFF))
        self.lane = np.uint64(lane)

    def block(self, rows: np.ndarray, index: int) -> np.ndarray:
        """Four uniforms per row from counter block ``index``; shape (n, 4)."""
        rows = np.asarray(rows, dtype=np.uint64)
        ctr = np.zeros(rows.shape + (4,), dtype=np.uint64)
        ctr[..., 0] = np.uint64(index)
        ctr[..., 1] = rows
        ctr[..., 2] = self.lane
        return _to_open_unit(philox4x64(ctr, self.key))

    def uniforms(self, rows: np.ndarray, count: int) -> np.ndarray:
        """The first ``count`` uniforms of each row; shape (n, count)."""
        nblocks = -(-count // 4)
        blocks = [self.block(rows, b) for b in range(nblocks)]
        if not blocks:
            return np.empty((len(rows), 0))
        return np.concatenate(blocks, axis=-1)[..., :count]


class ScalarStream:
    """Sequential view of one row's stream with a ``random()`` method."""

    def __init__(self, streams: RowStreams, row: int):
        self._streams = streams
        self._row = np.array([row], dtype=np.uint64)
        self._index = 0
        self._buf: list[float] = []

    def random(self) -> float:
        if not self._buf:
            self._buf = list(self._streams.block(self._row, self._index)[0])
            self._index += 1
        return self._buf.pop(0)
