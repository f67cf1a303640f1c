"""Balanced transversals of sequences of closed sets on the line.

Given closed sets ``A_0 = {0}, A_1, ..., A_n = {s}``, pick ``a_i`` in ``A_i``
so that all steps ``z_i = a_i - a_{i-1}`` lie in a common window
``[x, x + 1]``.  For fixed ``x`` the reachable positions after ``i`` steps form
an interval ``J_i(x) = [L_i(x), R_i(x)]``::

    L_1 = x,     L_{i+1} = x     + successor(A_i, L_i)
    R_1 = x + 1, R_{i+1} = x + 1 + predecessor(A_i, R_i)

Both ends are nondecreasing in ``x`` and every target is covered by some
window, so the offset can be found by bisection on the three-way test
"``R_n < s``" / "``L_n > s``" / hit.  :func:`propagate` accepts a relaxed pair
``x_lo <= x_hi`` and uses ``x_lo`` for the lower end and ``x_hi`` for the
upper one; extraction from a relaxed window yields steps in
``[x_lo, x_hi + 1]``, which turns a near-miss of the bisection into a
certified spread bound.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import (
    BracketFailure,
    DensityViolation,
    EndpointViolation,
    ExtractionFailure,
    Infeasible,
    NoElementAbove,
    NoElementBelow,
    ValidationError,
)
from .sets1d import INF, TAU_PT, ClosedSet1D

DEFAULT_EPS = 1e-9
_BRACKET_LIMIT = 2.0**60


@dataclass(frozen=True)
class GridSequence1D:
    """The sets ``A_0, ..., A_n`` with target ``s``.

    ``dense=True`` requires every interior set to meet each closed interval
    of length one.  Block-partition inputs use ``dense=False``: interior sets
    may be bounded and running off their ends is treated as a truncated
    window instead of an error.
    """

    sets: tuple[ClosedSet1D, ...]
    s: float
    dense: bool = True

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        if len(self.sets) < 2:
            raise ValidationError("a sequence needs at least A_0 and A_n")
        first = self.sets[0].singleton_value()
        if first is None or first != 0:
            raise EndpointViolation("A_0 must be the singleton {0}")
        last = self.sets[-1].singleton_value()
        if last is None or abs(last - self.s) > TAU_PT * max(1.0, abs(self.s)):
            raise EndpointViolation(f"A_n must be the singleton {{{self.s}}}")
        if self.dense:
            for i, a in enumerate(self.sets[1:-1], start=1):
                if not a.is_unit_dense():
                    raise DensityViolation(f"interior set A_{i} misses some closed interval of length 1")

    @property
    def n(self) -> int:
        return len(self.sets) - 1

    @classmethod
    def from_interior(cls, interior: Sequence[ClosedSet1D], s: float, dense: bool = True) -> "GridSequence1D":
        return cls((ClosedSet1D.point(0.0), *interior, ClosedSet1D.point(s)), s, dense)

    def normalized(self) -> "GridSequence1D":
        """Shift ``A_i`` by ``-i * s / n`` so the target becomes 0."""
        t = self.s / self.n
        interior = [a.shift(-i * t) for i, a in enumerate(self.sets[1:-1], start=1)]
        return GridSequence1D.from_interior(interior, 0.0, self.dense)


@dataclass(frozen=True)
class WindowState:
    """Windows ``[L_i, R_i]`` for ``i = 1..n`` (index 0 unused).

    ``infeasible_low_from`` is the first index whose lower end ran past the
    top of a set (``L`` is ``+inf`` from there), ``infeasible_high_from`` the
    mirror image (``R`` is ``-inf``).  ``empty_from`` marks a window that
    missed its set entirely.
    """

    L: tuple
    R: tuple
    x_lo: float
    x_hi: float
    infeasible_low_from: int | None = None
    infeasible_high_from: int | None = None
    empty_from: int | None = None

    @property
    def n(self) -> int:
        return len(self.L) - 1

    def flagged_at(self, h: int) -> bool:
        return any(f is not None and f <= h for f in (self.infeasible_low_from, self.infeasible_high_from, self.empty_from))

    def compare(self, p, h: int | None = None) -> str:
        """Three-way test at index ``h``: ``"low"`` (raise x), ``"high"`` (lower x), ``"hit"`` or ``"empty"``."""
        h = self.n if h is None else h
        if self.infeasible_low_from is not None and self.infeasible_low_from <= h:
            return "high"
        if self.infeasible_high_from is not None and self.infeasible_high_from <= h:
            return "low"
        if self.empty_from is not None and self.empty_from <= h:
            return "empty"
        if self.R[h] < p:
            return "low"
        if self.L[h] > p:
            return "high"
        return "hit"


@dataclass(frozen=True)
class Transversal1D:
    points: tuple
    offset_window: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.points) - 1

    @property
    def z(self) -> tuple:
        return tuple(b - a for a, b in zip(self.points, self.points[1:]))

    @property
    def spread(self) -> float:
        z = self.z
        return max(z) - min(z) if z else 0.0

    def check(self, seq: GridSequence1D) -> None:
        if len(self.points) != len(seq.sets):
            raise ValidationError("transversal length does not match the sequence")
        for i, (a, A) in enumerate(zip(self.points, seq.sets)):
            if not A.contains(a):
                raise ValidationError(f"a_{i} = {a} is not in A_{i}")


class WindowOffset(NamedTuple):
    x_lo: float
    x_hi: float
    exact: bool


def _propagate(sets, x_lo, x_hi, one=1) -> WindowState:
    n = len(sets) - 1
    L = [None] * (n + 1)
    R = [None] * (n + 1)
    L[1], R[1] = x_lo, x_hi + one
    flags = {}
    for i in range(1, n):
        A = sets[i]
        try:
            lo_el = A.successor(L[i])
        except NoElementAbove:
            flags["infeasible_low_from"] = i + 1
        try:
            hi_el = A.predecessor(R[i])
        except NoElementBelow:
            flags["infeasible_high_from"] = i + 1
        if not flags and lo_el > R[i]:
            flags["empty_from"] = i + 1
        if flags:
            for j in range(i + 1, n + 1):
                L[j], R[j] = INF, -INF
            break
        L[i + 1] = x_lo + lo_el
        R[i + 1] = x_hi + one + hi_el
    return WindowState(tuple(L), tuple(R), x_lo, x_hi, **flags)


def propagate(seq: GridSequence1D, x_lo: float, x_hi: float | None = None) -> WindowState:
    """Run the window recursion for offsets ``x_lo <= x_hi``.

    With ``x_lo == x_hi == x`` this is exactly ``J_i(x)``.  Infeasibility is
    recorded in the returned state, never raised.
    """
    x_hi = x_lo if x_hi is None else x_hi
    if x_lo > x_hi:
        raise ValidationError(f"need x_lo <= x_hi, got {x_lo} > {x_hi}")
    return _propagate(seq.sets, x_lo, x_hi)


def _test(seq_sets, x, p, h):
    return _propagate(seq_sets[: h + 1], x, x).compare(p, h)


def find_window_offset(seq: GridSequence1D, p: float, h: int | None = None, eps: float = DEFAULT_EPS) -> WindowOffset:
    """Find ``x`` with ``p`` in ``J_h(x)`` by bisection.

    Returns ``(x, x, True)`` on an exact hit.  Otherwise returns a bracket of
    width at most ``eps`` with ``R_h(x_lo) < p < L_h(x_hi)``, so ``p`` lies in
    the relaxed window ``[L_h(x_lo), R_h(x_hi)]``.

    For ``p == 0`` the bracket starts at ``[-1, 0]``: at ``x = -1`` no window
    reaches above 0 and at ``x = 0`` none reaches below it.  Otherwise the
    bracket is grown by doubling around ``p / h``.
    """
    h = seq.n if h is None else h
    if not 1 <= h <= seq.n:
        raise ValidationError(f"h must be in [1, {seq.n}], got {h}")
    if not eps > 0:
        raise ValidationError("eps must be positive")
    sets = seq.sets

    def outcome(x):
        res = _test(sets, x, p, h)
        if res == "empty":
            raise ValidationError("window missed a set; the three-way test needs dense sets")
        return res

    if p == 0:
        lo, hi = -1.0, 0.0
        for x in (lo, hi):
            if outcome(x) == "hit":
                return WindowOffset(x, x, True)
    else:
        centre = p / h
        lo = hi = None
        width = 1.0
        while lo is None or hi is None:
            if width > _BRACKET_LIMIT:
                raise BracketFailure(f"could not bracket p={p} at h={h}")
            for x in (centre - width, centre + width):
                res = outcome(x)
                if res == "hit":
                    return WindowOffset(x, x, True)
                if res == "low" and lo is None:
                    lo = x
                elif res == "high" and hi is None:
                    hi = x
            width *= 2.0
        if lo > hi:
            raise BracketFailure("window ends are not monotone in the offset")

    # bisect to eps / 2 so rounding in the extraction stays inside eps
    while hi - lo > eps / 2:
        mid = lo + (hi - lo) / 2
        if mid <= lo or mid >= hi:
            break
        res = outcome(mid)
        if res == "hit":
            return WindowOffset(mid, mid, True)
        if res == "low":
            lo = mid
        else:
            hi = mid
    return WindowOffset(lo, hi, False)


def _extract(sets, s, state: WindowState, tol=0, one=1):
    n = len(sets) - 1
    if state.flagged_at(n) or not (state.L[n] - tol <= s <= state.R[n] + tol):
        raise ExtractionFailure(f"target {s} is not in the final window")
    pts = [None] * (n + 1)
    pts[n] = s
    for i in range(n - 1, 0, -1):
        lo = max(state.L[i], pts[i + 1] - state.x_hi - one)
        hi = min(state.R[i], pts[i + 1] - state.x_lo)
        try:
            a = sets[i].successor(lo)
        except NoElementAbove as exc:
            raise ExtractionFailure(f"no element of A_{i} above {lo}") from exc
        if a > hi + tol * max(1.0, abs(hi)):
            raise ExtractionFailure(f"A_{i} has no element in [{lo}, {hi}]")
        pts[i] = a
    pts[0] = 0 * s
    return pts


def extract(seq: GridSequence1D, state: WindowState) -> Transversal1D:
    """Backtrack a transversal from a propagated state.

    Walks down from ``a_n = s`` choosing the smallest admissible element of
    each set, so every step lies in ``[x_lo, x_hi + 1]``.
    """
    pts = _extract(seq.sets, seq.s, state, tol=TAU_PT)
    pts[0] = 0.0
    return Transversal1D(tuple(pts), (state.x_lo, state.x_hi))


def solve(seq: GridSequence1D, eps: float = DEFAULT_EPS) -> Transversal1D:
    """Transversal with spread at most ``1 + eps`` (at most 1 on an exact hit)."""
    if not seq.dense:
        raise ValidationError("solve needs a dense sequence; use solve_exact_finite for finite sets")
    n = seq.n
    t = seq.s / n
    norm = seq.normalized()
    x_lo, x_hi, _ = find_window_offset(norm, 0.0, n, eps)
    state = propagate(norm, x_lo, x_hi)
    pts = _extract(norm.sets, 0.0, state, tol=TAU_PT)
    shifted = [0.0] + [a + i * t for i, a in enumerate(pts[1:-1], start=1)] + [seq.s]
    return Transversal1D(tuple(shifted), (x_lo + t, x_hi + t))


class _SortedInts:
    """Finite set of integers with the successor/predecessor protocol."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = sorted(set(values))

    def successor(self, x):
        i = bisect_left(self.values, x)
        if i == len(self.values):
            raise NoElementAbove(str(x))
        return self.values[i]

    def predecessor(self, x):
        i = bisect_right(self.values, x)
        if i == 0:
            raise NoElementBelow(str(x))
        return self.values[i - 1]


def solve_exact_finite(seq: GridSequence1D, min_offset: float | None = None) -> Transversal1D:
    """Exact solver for sequences whose interior sets are finite.

    Window ends are piecewise ``x + const`` with breakpoints at differences of
    elements of consecutive sets (shifted by 0 or -1), so the smallest
    feasible offset is one of these candidates, and so is the largest one.
    Candidates and their midpoints are sorted and bisected for the largest
    offset whose lower window end stays at or below the target; when the
    sets are unit-dense within their range this offset is feasible.  If the
    test is inconclusive (a window missed its set) every candidate is tried
    from the top down.

    All arithmetic is on integers: floats are dyadic rationals, so scaling
    by ``2 * n * 2**k`` makes every element, shift and midpoint integral and
    the returned spread is at most 1 without rounding.

    ``min_offset`` restricts the search to offsets ``x >= min_offset``.
    """
    n = seq.n
    for i, A in enumerate(seq.sets[1:-1], start=1):
        if not A.is_finite:
            raise ValidationError(f"A_{i} is not a finite set of points")
    values = [seq.sets[i].finite_values() for i in range(n + 1)]
    denom = max(
        (Fraction(v).denominator for vs in values for v in vs),
        default=1,
    )
    denom = max(denom, Fraction(seq.s).denominator)
    scale = 2 * n * denom
    one = scale
    t_scaled = int(Fraction(seq.s) * 2 * denom)  # s / n in scaled units

    originals = []
    sets = []
    for i, vs in enumerate(values):
        shift = i * t_scaled
        lookup = {int(Fraction(v) * scale) - shift: v for v in vs}
        originals.append(lookup)
        sets.append(_SortedInts(lookup))
    # the endpoints are exactly {0} after normalisation
    sets[0], sets[n] = _SortedInts([0]), _SortedInts([0])

    pool = set()
    seen_pairs = {}
    for i in range(1, n + 1):
        key = (id(seq.sets[i]), id(seq.sets[i - 1])) if 1 < i < n else None
        if key is not None and key in seen_pairs:
            continue
        diffs = {a - b for a in sets[i].values for b in sets[i - 1].values}
        if key is not None:
            # identical consecutive sets give identical differences
            seen_pairs[key] = True
        pool.update(diffs)
        pool.update(d - one for d in diffs)
    lower = None
    if min_offset is not None:
        lower = int(Fraction(min_offset) * scale) - t_scaled
        pool.add(lower)
    cands = sorted(pool)
    mids = [(a + b) // 2 for a, b in zip(cands, cands[1:])]
    cands = sorted(set(cands) | set(mids))
    if lower is not None:
        cands = cands[bisect_left(cands, lower):]

    def attempt(x):
        state = _propagate(sets, x, x, one)
        res = state.compare(0, n)
        return res, state

    # largest candidate whose lower window end does not overshoot the target
    found = None
    inconclusive = False
    lo, hi = 0, len(cands) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        res, state = attempt(cands[mid])
        if res == "empty":
            inconclusive = True
            break
        if res == "high":
            hi = mid - 1
        else:
            best = (cands[mid], state, res)
            lo = mid + 1
    pts = None
    if not inconclusive and best is not None and best[2] == "hit":
        try:
            pts = _extract(sets, 0, best[1], one=one)
            found = best[:2]
        except ExtractionFailure:
            pass
    if found is None:
        for x in reversed(cands):
            res, state = attempt(x)
            if res != "hit":
                continue
            try:
                pts = _extract(sets, 0, state, one=one)
            except ExtractionFailure:
                continue
            found = (x, state)
            break
    if found is None:
        raise Infeasible("no offset admits a transversal with spread <= 1")

    x = found[0]
    out = [originals[i][a] for i, a in enumerate(pts)]
    out[0], out[n] = 0.0, seq.s
    x_orig = float(Fraction(x + t_scaled, scale))
    return Transversal1D(tuple(out), (x_orig, x_orig))


def transversal_z_exact(points) -> list[Fraction]:
    """Steps of a transversal in exact rational arithmetic."""
    return [Fraction(b) - Fraction(a) for a, b in zip(points, points[1:])]


def exact_spread(points) -> Fraction:
    z = transversal_z_exact(points)
    return max(z) - min(z) if z else Fraction(0)


__all__ = [
    "DEFAULT_EPS",
    "GridSequence1D",
    "Transversal1D",
    "WindowOffset",
    "WindowState",
    "exact_spread",
    "extract",
    "find_window_offset",
    "propagate",
    "solve",
    "solve_exact_finite",
]
