"""Interval and predecessor encodings of real sequences.

The interval code maps each value to the pivot interval containing it.
The predecessor code records, for each value, the position of the
largest earlier value below it (0 when the value is a new minimum); it
carries the same information as the Lehmer code and lets a sequence be
sorted with one linked-list insertion per element.
"""

from __future__ import annotations

import struct
from bisect import insort, bisect_left

import numpy as np

from .vlist import PivotList, intervals_of


class DuplicateValueError(ValueError):
    """Exact duplicate values; forbidden by the continuous input model."""


class InconsistentCodeError(ValueError):
    """A predecessor code that does not describe its value sequence."""


def b_encode(vals, vl: PivotList) -> tuple[int, ...]:
    """Interval code: entry i is the pivot interval index of vals[i]."""
    vals = np.asarray(vals, dtype=float)
    if vals.size == 0:
        return ()
    return tuple(int(r) for r in intervals_of(vals, vl))


def pi_encode(vals, with_ranks: bool = False):
    """Predecessor code of a real sequence.

    Entry i (1-based position semantics) is 0 when vals[i] is the minimum
    of the prefix, otherwise the 1-based position of the largest earlier
    value less than vals[i].  With ``with_ranks`` the 0-based sorted rank
    of each value within its prefix is returned too (used by trie
    training, which needs insertion ranks).
    """
    code: list[int] = []
    ranks: list[int] = []
    keys: list[float] = []      # sorted prefix values
    pos: list[int] = []         # positions aligned with keys
    for i, x in enumerate(vals):
        x = float(x)
        r = bisect_left(keys, x)
        if r < len(keys) and keys[r] == x:
            raise DuplicateValueError(f"duplicate value {x} at positions "
                                      f"{pos[r]} and {i + 1}")
        code.append(pos[r - 1] if r > 0 else 0)
        ranks.append(r)
        keys.insert(r, x)
        pos.insert(r, i + 1)
    if with_ranks:
        return tuple(code), tuple(ranks)
    return tuple(code)


def sort_from_pi(vals, code) -> list[int]:
    """Ascending order (1-based positions) from a predecessor code.

    Threads each element into a doubly linked list directly after its
    predecessor entry, so exactly one insertion happens per element.  A
    final sweep verifies the order; an inversion means the code does not
    belong to these values.
    """
    m = len(code)
    if len(vals) != m:
        raise InconsistentCodeError("code length differs from value count")
    if m == 0:
        return []
    # linked list over 0..m (node 0 is the head sentinel; node i is position i)
    nxt = [0] * (m + 1)
    prv = [0] * (m + 1)
    head = 0
    nxt[head] = -1
    insertions = 0
    for i, j in enumerate(code, start=1):
        if not 0 <= j < i:
            raise InconsistentCodeError(f"entry {j} at position {i} out of range")
        after = j  # 0 = sentinel head
        follow = nxt[after]
        nxt[after] = i
        prv[i] = after
        nxt[i] = follow
        if follow != -1:
            prv[follow] = i
        insertions += 1
    assert insertions == m
    order: list[int] = []
    node = nxt[head]
    while node != -1:
        order.append(node)
        node = nxt[node]
    for a, b in zip(order, order[1:]):
        if not vals[a - 1] < vals[b - 1]:
            raise InconsistentCodeError(
                f"inversion between positions {a} and {b}: code is inconsistent")
    return order


# --------------------------------------------------------------------------
# serialization: length-prefixed arrays of unsigned 32-bit entries

def code_to_bytes(code) -> bytes:
    return struct.pack("<I", len(code)) + struct.pack(f"<{len(code)}I", *code)


def code_from_bytes(buf: bytes, offset: int = 0) -> tuple[tuple[int, ...], int]:
    (m,) = struct.unpack_from("<I", buf, offset)
    vals = struct.unpack_from(f"<{m}I", buf, offset + 4)
    return vals, offset + 4 + 4 * m
