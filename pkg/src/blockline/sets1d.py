"""Closed subsets of the real line built from intervals, points and lattices.

A :class:`ClosedSet1D` is a finite union of primitives.  The order queries
:meth:`ClosedSet1D.successor` and :meth:`ClosedSet1D.predecessor` return the
nearest element at or above/below a query point; they are the only set
operations the window propagation needs.

>>> Z = ClosedSet1D.lattice(0.0, 1.0)
>>> Z.successor(0.3), Z.predecessor(0.3)
(1.0, 0.0)
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

from .errors import NoElementAbove, NoElementBelow, ValidationError

TAU_PT = 1e-12
"""Absolute tolerance for point and lattice membership."""

INF = math.inf


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValidationError("interval bounds must not be NaN")
        if self.lo > self.hi:
            raise ValidationError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")
        if self.lo == INF or self.hi == -INF:
            raise ValidationError("interval must contain a real number")


@dataclass(frozen=True)
class Point:
    at: float

    def __post_init__(self):
        object.__setattr__(self, "at", float(self.at))
        if not math.isfinite(self.at):
            raise ValidationError(f"point must be finite, got {self.at}")


@dataclass(frozen=True)
class Lattice:
    """The set ``{offset + k * period : k integer}``."""

    offset: float
    period: float

    def __post_init__(self):
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "period", float(self.period))
        if not (math.isfinite(self.offset) and math.isfinite(self.period)):
            raise ValidationError("lattice offset and period must be finite")
        if self.period <= 0:
            raise ValidationError(f"lattice period must be > 0, got {self.period}")

    def _index_at_or_above(self, x) -> int:
        k = math.ceil((x - self.offset) / self.period)
        # ceil on a rounded quotient can be off by one in either direction
        if self.offset + (k - 1) * self.period >= x:
            k -= 1
        elif self.offset + k * self.period < x:
            k += 1
        return k

    def successor(self, x):
        k = self._index_at_or_above(x)
        cand = self.offset + k * self.period
        below = self.offset + (k - 1) * self.period
        if x - below <= TAU_PT:
            # x sits on a lattice point up to rounding
            return x
        return cand

    def predecessor(self, x):
        k = self._index_at_or_above(x)
        cand = self.offset + k * self.period
        if cand - x <= TAU_PT:
            return x
        return self.offset + (k - 1) * self.period

    def contains(self, x) -> bool:
        k = round((x - self.offset) / self.period)
        return abs(self.offset + k * self.period - x) <= TAU_PT


Part = Union[Interval, Point, Lattice]


@dataclass(frozen=True)
class ClosedSet1D:
    """Finite union of closed intervals, points and lattices.

    Values are immutable; the sorted lookup tables are built once in
    ``__post_init__``.
    """

    parts: tuple[Part, ...] = ()
    _points: tuple = field(init=False, repr=False, compare=False)
    _intervals: tuple = field(init=False, repr=False, compare=False)
    _lattices: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        for p in parts:
            if not isinstance(p, (Interval, Point, Lattice)):
                raise ValidationError(f"unknown set primitive: {p!r}")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "_points", tuple(sorted({p.at for p in parts if isinstance(p, Point)})))
        object.__setattr__(
            self, "_intervals", tuple(sorted((p for p in parts if isinstance(p, Interval)), key=lambda iv: iv.lo))
        )
        object.__setattr__(self, "_lattices", tuple(p for p in parts if isinstance(p, Lattice)))

    # -- constructors -----------------------------------------------------

    @classmethod
    def interval(cls, lo: float, hi: float) -> "ClosedSet1D":
        return cls((Interval(lo, hi),))

    @classmethod
    def points(cls, values: Iterable[float]) -> "ClosedSet1D":
        return cls(tuple(Point(v) for v in values))

    @classmethod
    def point(cls, value: float) -> "ClosedSet1D":
        return cls((Point(value),))

    @classmethod
    def lattice(cls, offset: float = 0.0, period: float = 1.0) -> "ClosedSet1D":
        return cls((Lattice(offset, period),))

    @classmethod
    def real_line(cls) -> "ClosedSet1D":
        return cls((Interval(-INF, INF),))

    @classmethod
    def union(cls, *sets: "ClosedSet1D") -> "ClosedSet1D":
        return cls(tuple(p for s in sets for p in s.parts))

    # -- queries ----------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.parts

    @property
    def is_finite(self) -> bool:
        """True when every part is a point or a degenerate interval."""
        return all(isinstance(p, Point) or (isinstance(p, Interval) and p.lo == p.hi) for p in self.parts)

    def finite_values(self) -> list[float]:
        """Sorted distinct elements of a finite set."""
        if not self.is_finite:
            raise ValidationError("set is not a finite union of points")
        return sorted({p.at if isinstance(p, Point) else p.lo for p in self.parts})

    def singleton_value(self):
        """The unique element if the set is a single point, else ``None``."""
        if not self.parts or not self.is_finite:
            return None
        values = self.finite_values()
        return values[0] if len(values) == 1 else None

    def contains(self, x) -> bool:
        i = bisect_left(self._points, x - TAU_PT)
        if i < len(self._points) and self._points[i] <= x + TAU_PT:
            return True
        if any(iv.lo - TAU_PT <= x <= iv.hi + TAU_PT for iv in self._intervals):
            return True
        return any(lat.contains(x) for lat in self._lattices)

    __contains__ = contains

    def successor(self, x):
        """Smallest element ``>= x``; raises :class:`NoElementAbove`."""
        best = INF
        found = False
        i = bisect_left(self._points, x)
        if i < len(self._points):
            best, found = self._points[i], True
        for iv in self._intervals:
            if iv.lo > best:
                break
            if iv.hi >= x:
                cand = x if iv.lo <= x else iv.lo
                if not found or cand < best:
                    best, found = cand, True
        for lat in self._lattices:
            cand = lat.successor(x)
            if not found or cand < best:
                best, found = cand, True
        if not found:
            raise NoElementAbove(f"no element >= {x}")
        return best

    def predecessor(self, x):
        """Largest element ``<= x``; raises :class:`NoElementBelow`."""
        best = -INF
        found = False
        i = bisect_right(self._points, x)
        if i > 0:
            best, found = self._points[i - 1], True
        for iv in self._intervals:
            if iv.lo <= x:
                cand = x if iv.hi >= x else iv.hi
                if not found or cand > best:
                    best, found = cand, True
        for lat in self._lattices:
            cand = lat.predecessor(x)
            if not found or cand > best:
                best, found = cand, True
        if not found:
            raise NoElementBelow(f"no element <= {x}")
        return best

    def shift(self, c: float) -> "ClosedSet1D":
        """The translate ``set + c``."""
        out = []
        for p in self.parts:
            if isinstance(p, Interval):
                out.append(Interval(p.lo + c, p.hi + c))
            elif isinstance(p, Point):
                out.append(Point(p.at + c))
            else:
                out.append(Lattice(p.offset + c, p.period))
        return ClosedSet1D(tuple(out))

    def is_unit_dense(self) -> bool:
        return is_unit_dense(self)


def _common_period(periods: list[float], max_points: int = 1_000_000):
    """Smallest common period of lattices, or ``None`` if incommensurable.

    Periods are compared through rational approximations with denominators
    up to 1000; a match must hold to relative 1e-12.
    """
    base = periods[0]
    ratios = []
    for p in periods:
        r = Fraction(p / base).limit_denominator(1000)
        if abs(float(r) - p / base) > 1e-12 * max(1.0, p / base):
            return None
        ratios.append(r)
    num = reduce(math.lcm, (r.numerator for r in ratios))
    den = reduce(math.gcd, (r.denominator for r in ratios))
    common = base * num / den
    if sum(common / p for p in periods) > max_points:
        return None
    return common


def is_unit_dense(s: ClosedSet1D) -> bool:
    """Whether every closed interval of length one meets ``s``.

    Decided exactly up to floating rounding.  Far enough from every finite
    boundary the set is either covered by an unbounded interval or equals
    the union of its lattices, which is periodic when the periods are
    commensurable; so it suffices to inspect a window reaching one full
    common period past all finite boundaries.  Incommensurable lattices
    whose periods all exceed one leave gaps longer than one somewhere, so a
    tail relying on them is not dense.
    """
    if s.is_empty:
        return False
    lattices = list(s._lattices)
    if any(lat.period <= 1.0 + TAU_PT for lat in lattices):
        return True
    intervals = list(s._intervals)
    left_covered = any(iv.lo == -INF for iv in intervals)
    right_covered = any(iv.hi == INF for iv in intervals)
    if not (left_covered and right_covered) and not lattices:
        return False

    finite = [v for iv in intervals for v in (iv.lo, iv.hi) if math.isfinite(v)]
    finite += list(s._points)
    finite += [lat.offset for lat in lattices]
    lo_b, hi_b = (min(finite), max(finite)) if finite else (0.0, 0.0)

    margin = 2.0
    if lattices and not (left_covered and right_covered):
        common = _common_period([lat.period for lat in lattices])
        if common is None:
            return False
        margin += common
    w_lo, w_hi = lo_b - margin, hi_b + margin

    pieces = [(max(iv.lo, w_lo), min(iv.hi, w_hi)) for iv in intervals if iv.hi >= w_lo and iv.lo <= w_hi]
    pieces += [(p, p) for p in s._points if w_lo <= p <= w_hi]
    for lat in lattices:
        k = math.ceil((w_lo - lat.offset) / lat.period)
        while (v := lat.offset + k * lat.period) <= w_hi:
            pieces.append((v, v))
            k += 1
    if not pieces:
        return False
    pieces.sort()
    reach = pieces[0][1]
    for lo, hi in pieces[1:]:
        if lo - reach > 1.0 + TAU_PT:
            return False
        reach = max(reach, hi)
    return True
