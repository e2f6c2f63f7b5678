"""Monotone-subsequence statistics and the pairwise same-group test.

Two positions belong to the same hidden group exactly when their values
are functions of a shared parameter.  Sorting the sample pairs by the
first coordinate then makes the second coordinate piecewise monotone, so
its longest monotone subsequence is a constant fraction of the sample;
for independent positions it concentrates near twice the square root of
the sample size.  Thresholding between the two regimes separates the
cases.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

import numpy as np


class SampleTieError(ValueError):
    """Exact ties in a coordinate sample; the input model forbids them."""


class SampleSizeError(ValueError):
    """Too few samples for the test to mean anything."""


def lis(seq) -> int:
    """Length of the longest strictly increasing subsequence (patience piles)."""
    tails: list = []
    for x in seq:
        i = bisect_left(tails, x)
        if i == len(tails):
            tails.append(x)
        else:
            tails[i] = x
    return len(tails)


def lms(seq) -> int:
    """Length of the longest monotone (increasing or decreasing) subsequence."""
    seq = list(seq)
    return max(lis(seq), lis(seq[::-1]))


@dataclass
class PairSampleBlock:
    """Paired samples of two positions across the same instances."""

    a_vals: np.ndarray
    b_vals: np.ndarray

    def __post_init__(self):
        self.a_vals = np.asarray(self.a_vals, dtype=float)
        self.b_vals = np.asarray(self.b_vals, dtype=float)
        if self.a_vals.shape != self.b_vals.shape or self.a_vals.ndim != 1:
            raise ValueError("paired samples must be equal-length vectors")

    @property
    def ell(self) -> int:
        return len(self.a_vals)


def same_group_test(block: PairSampleBlock, c0: int, floor: int = 16,
                    margin: float = 1.0) -> bool:
    """Decide whether the two sampled positions share a hidden parameter.

    Sorts the pairs by the first coordinate and thresholds the longest
    monotone subsequence of the second at ``ell / (2*c0 + 1)``.  For true
    same-group pairs with curves of at most ``c0`` extrema the threshold
    is met deterministically; for independent pairs it fails with
    overwhelming probability once ``ell`` is large.

    Raises ``SampleTieError`` on exact ties in the first coordinate
    (probability zero under the model, so a tie signals model violation)
    and ``SampleSizeError`` below the configured floor.
    """
    ell = block.ell
    if ell < floor:
        raise SampleSizeError(f"ell={ell} below floor {floor}")
    order = np.argsort(block.a_vals, kind="stable")
    a_sorted = block.a_vals[order]
    if (np.diff(a_sorted) == 0).any():
        raise SampleTieError("exact tie in conditioning coordinate")
    b_sorted = block.b_vals[order]
    threshold = margin * ell / (2 * c0 + 1)
    return lms(b_sorted) >= threshold


@dataclass(frozen=True)
class Partition:
    """Disjoint groups covering positions 0..n-1."""

    groups: tuple[frozenset[int], ...]

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    def normalized(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(g)) for g in self.groups))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def group_index(self) -> np.ndarray:
        out = np.empty(self.n, dtype=int)
        for k, g in enumerate(self.groups):
            for i in g:
                out[i] = k
        return out

    def to_json(self) -> list[list[int]]:
        return [sorted(i + 1 for i in g) for g in self.normalized()]

    @classmethod
    def from_json(cls, groups: list[list[int]]) -> "Partition":
        return cls(tuple(frozenset(i - 1 for i in g) for g in groups))


class UnionFind:
    """Path-compressing union-find over 0..n-1 with an operation counter."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.ops = 0

    def find(self, x: int) -> int:
        self.ops += 1
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def partition(self) -> Partition:
        groups: dict[int, set[int]] = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), set()).add(i)
        return Partition(tuple(frozenset(g) for g in groups.values()))


def learn_sort_partition(samples: np.ndarray, c0: int, floor: int = 16,
                         margin: float = 1.0) -> Partition:
    """Learn the hidden grouping from an (ell, n) sample matrix.

    Runs the same-group test on every position pair and unions the
    positives.  The pair tests are independent reads of the shared matrix;
    only the union-find merge is stateful.
    """
    samples = np.asarray(samples, dtype=float)
    ell, n = samples.shape
    uf = UnionFind(n)
    # presort each column once; pair (i, j) reuses column i's order
    orders = np.argsort(samples, axis=0, kind="stable")
    for i in range(n):
        col = samples[orders[:, i], i]
        if (np.diff(col) == 0).any():
            raise SampleTieError(f"exact tie in position {i} sample")
    thresholds = margin * ell / (2 * c0 + 1)
    if ell < floor:
        raise SampleSizeError(f"ell={ell} below floor {floor}")
    for i in range(n):
        oi = orders[:, i]
        for j in range(i + 1, n):
            if uf.find(i) == uf.find(j):
                continue
            if lms(samples[oi, j]) >= thresholds:
                uf.union(i, j)
    return uf.partition()
