"""Balanced contiguous partitions of a sequence of numbers in [0, 1].

Splitting ``s_1, ..., s_m`` into ``n`` contiguous (possibly empty) blocks is
the same as choosing prefix sums ``a_{x_1} <= ... <= a_{x_{n-1}}`` from
``A = {a_0, ..., a_m}``: a transversal of ``{0}, A, ..., A, {a_m}``.  The
exact finite solver then guarantees block sizes within 1 of each other.

>>> part = partition(BlockInstance((1.0, 1.0, 1.0), 2))
>>> sorted(part.sizes), part.spread
([1.0, 2.0], 1.0)
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .errors import CapExceeded, ValidationError
from .sets1d import ClosedSet1D
from .transversal1d import GridSequence1D, solve_exact_finite

DEFAULT_ORACLE_CAP = 10**7


@dataclass(frozen=True)
class BlockInstance:
    values: tuple[float, ...]
    n: int

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValidationError(f"block count must be a positive integer, got {self.n!r}")
        for i, v in enumerate(values, start=1):
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"s_{i} = {v} is outside [0, 1]")

    @property
    def m(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class BlockPartition:
    """Boundaries ``0 = x_0 <= ... <= x_n = m`` with block sizes and spread."""

    boundaries: tuple[int, ...]
    sizes: tuple[float, ...]
    spread: float

    def blocks(self, values: Sequence[float]) -> list[list[float]]:
        return [list(values[a:b]) for a, b in zip(self.boundaries, self.boundaries[1:])]

    def to_dict(self) -> dict:
        return {"boundaries": list(self.boundaries), "sizes": list(self.sizes), "spread": self.spread}


def prefix_sums(inst: BlockInstance) -> list[float]:
    """``(a_0, ..., a_m)``, each the correctly rounded exact partial sum."""
    total = Fraction(0)
    out = [0.0]
    for v in inst.values:
        total += Fraction(v)
        out.append(float(total))
    return out


def _from_boundaries(prefix: Sequence[float], bounds: Sequence[int]) -> BlockPartition:
    exact = [Fraction(prefix[b]) - Fraction(prefix[a]) for a, b in zip(bounds, bounds[1:])]
    spread = max(exact) - min(exact)
    return BlockPartition(tuple(int(b) for b in bounds), tuple(float(e) for e in exact), float(spread))


def partition(inst: BlockInstance) -> BlockPartition:
    """Contiguous partition into ``inst.n`` blocks with spread at most 1."""
    prefix = prefix_sums(inst)
    m, n = inst.m, inst.n
    if n == 1:
        return _from_boundaries(prefix, (0, m))
    A = ClosedSet1D.points(prefix)
    seq = GridSequence1D((ClosedSet1D.point(0.0), *([A] * (n - 1)), ClosedSet1D.point(prefix[-1])), prefix[-1], dense=False)
    # offsets below 0 would allow a boundary to move backwards
    tr = solve_exact_finite(seq, min_offset=0.0)
    bounds = [0]
    for value in tr.points[1:-1]:
        k = bisect_left(prefix, value, lo=bounds[-1])
        if k > m or prefix[k] != value:
            raise ValidationError(f"internal: value {value} has no prefix index at or after {bounds[-1]}")
        bounds.append(k)
    bounds.append(m)
    return _from_boundaries(prefix, bounds)


def _scaled_prefix(prefix: Sequence[float]):
    denom = max(Fraction(p).denominator for p in prefix)
    return [int(Fraction(p) * denom) for p in prefix], denom


def oracle_min_spread(inst: BlockInstance, cap: int = DEFAULT_ORACLE_CAP) -> tuple[float, BlockPartition]:
    """Minimum spread over all partitions, by exhaustive enumeration.

    Ties go to the lexicographically smallest boundary tuple.  Spreads are
    compared exactly in scaled integer arithmetic.
    """
    m, n = inst.m, inst.n
    count = math.comb(m + n - 1, n - 1)
    if count > cap:
        raise CapExceeded(f"{count} boundary tuples exceed the cap of {cap}")
    prefix = prefix_sums(inst)
    if n == 1:
        part = _from_boundaries(prefix, (0, m))
        return part.spread, part
    ints, _ = _scaled_prefix(prefix)
    if max(ints) < 2**62:
        P = np.asarray(ints, dtype=np.int64)
        inner = np.fromiter(
            (k for combo in combinations_with_replacement(range(m + 1), n - 1) for k in combo),
            dtype=np.int64,
            count=count * (n - 1),
        ).reshape(count, n - 1)
        bounds = np.concatenate(
            [np.zeros((count, 1), np.int64), inner, np.full((count, 1), m, np.int64)], axis=1
        )
        sizes = P[bounds[:, 1:]] - P[bounds[:, :-1]]
        spreads = sizes.max(axis=1) - sizes.min(axis=1)
        best = int(np.argmin(spreads))
        witness = bounds[best]
    else:
        best_spread, witness = None, None
        for combo in combinations_with_replacement(range(m + 1), n - 1):
            b = (0, *combo, m)
            sizes = [ints[j] - ints[i] for i, j in zip(b, b[1:])]
            sp = max(sizes) - min(sizes)
            if best_spread is None or sp < best_spread:
                best_spread, witness = sp, b
    part = _from_boundaries(prefix, witness)
    return part.spread, part


def partition_scaled(values: Sequence[float], n: int) -> tuple[BlockPartition, float]:
    """Partition arbitrary nonnegative values by first dividing by their maximum.

    Returns the partition with sizes and spread in the original units and
    the scale factor; the spread is then at most the largest value.
    """
    scale = max((abs(v) for v in values), default=0.0)
    if scale == 0.0:
        scale = 1.0
    scaled = BlockInstance(tuple(v / scale for v in values), n)
    part = partition(scaled)
    exact = [sum(map(Fraction, values[a:b]), Fraction(0)) for a, b in zip(part.boundaries, part.boundaries[1:])]
    rescaled = BlockPartition(part.boundaries, tuple(float(e) for e in exact), float(max(exact) - min(exact)))
    return rescaled, scale
