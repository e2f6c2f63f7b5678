"""The sorted pivot list that carves the real line into O(1)-occupancy intervals.

Pooling the values of many training instances and keeping every
``lam``-th order statistic yields ``n`` pivots whose consecutive
intervals each contain O(1) input values in expectation under the
training distribution.  Conceptual sentinels at minus and plus infinity
make the intervals cover the whole line.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PivotList:
    """Strictly increasing interior pivots v_1 < ... < v_n plus sentinels."""

    pivots: np.ndarray
    lam: int

    def __post_init__(self):
        object.__setattr__(self, "pivots", np.asarray(self.pivots, dtype=float))
        if self.pivots.ndim != 1:
            raise ValueError("pivots must be a vector")
        if (np.diff(self.pivots) <= 0).any():
            raise ValueError("pivots must strictly increase (duplicate pooled values?)")

    @property
    def n(self) -> int:
        return len(self.pivots)

    def boundary(self, r: int) -> float:
        """Left endpoint of interval r, with the infinite sentinels."""
        if r <= 0:
            return -np.inf
        if r > self.n:
            return np.inf
        return float(self.pivots[r - 1])


def build_vlist(samples: np.ndarray) -> PivotList:
    """Pool a (lam, n) sample matrix and keep every lam-th order statistic.

    The pooled values y_1 < ... < y_{lam*n} define pivots v_r = y_{lam*r}.
    Duplicates in the pool have probability zero under the model, so any
    collision is reported as a model violation.
    """
    samples = np.asarray(samples, dtype=float)
    lam, n = samples.shape
    pooled = np.sort(samples.reshape(-1))
    if (np.diff(pooled) == 0).any():
        raise ValueError("duplicate pooled values: input model violated")
    pivots = pooled[lam - 1::lam][:n]
    return PivotList(pivots, lam)


def interval_of(v: float, vl: PivotList) -> int:
    """Index r in [0, n] with v_r <= v < v_{r+1} (half-open, routes right on ties)."""
    return int(np.searchsorted(vl.pivots, v, side="right"))


def intervals_of(vals: np.ndarray, vl: PivotList) -> np.ndarray:
    """Vectorized ``interval_of``."""
    return np.searchsorted(vl.pivots, np.asarray(vals), side="right").astype(np.int64)


def occupancy_report(vl: PivotList, fresh: np.ndarray) -> np.ndarray:
    """Mean number of values per interval over fresh instances.

    Returns an array of length n+1 (intervals r = 0..n).  Conservation
    makes every row sum to n, so the report is a distribution over
    intervals scaled by n.
    """
    fresh = np.asarray(fresh, dtype=float)
    count, n = fresh.shape
    idx = np.searchsorted(vl.pivots, fresh.reshape(-1), side="right")
    hist = np.bincount(idx, minlength=vl.n + 1).astype(float)
    return hist / count


_MAGIC = b"SIVL"


def save_vlist(path, vl: PivotList) -> None:
    """Flat little-endian float64 pivots behind an (n, lam) header."""
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<II", vl.n, vl.lam))
        f.write(np.asarray(vl.pivots, dtype="<f8").tobytes())


def load_vlist(path) -> PivotList:
    with open(path, "rb") as f:
        if f.read(4) != _MAGIC:
            raise ValueError(f"{path}: not a pivot-list file")
        n, lam = struct.unpack("<II", f.read(8))
        pivots = np.frombuffer(f.read(8 * n), dtype="<f8")
    return PivotList(pivots, lam)
