"""The lower-bound construction in the plane and its explicit transversals.

Each interior set of the construction is a union of labelled boxes: a
vertical part (N above, S below), a horizontal part (E right, W left) and
four corner quadrants.  In the first half the parts shrink towards the
axes; the second half mirrors the first about the diagonal ``x = y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import (
    DensityViolation,
    EndpointViolation,
    MembershipViolation,
    UnlabeledSequence,
    UnsupportedPrimitive,
    ValidationError,
)
from .geom2d import (
    ANALYTIC,
    INF,
    MEMBERSHIP_TOL,
    Box,
    BoxUnionSet2D,
    DensityProbe,
    NormKind,
    Transversal2D,
    Vec2,
    is_grid_dense_2d,
)
from .sets1d import Interval, Lattice, Point
from .transversal1d import GridSequence1D

LABEL_PRIORITY = ("N", "S", "E", "W", "QNE", "QNW", "QSE", "QSW")
REFLECTED_LABEL = {"N": "E", "E": "N", "S": "W", "W": "S", "QNE": "QNE", "QSW": "QSW", "QNW": "QSE", "QSE": "QNW"}

TRIANGLE_DIAMETER = 4 * math.sqrt(2 - math.sqrt(3))
"""Diameter of the equilateral triangle achieved by :func:`claim1_transversal`."""


@lru_cache(maxsize=4096)
def _dense(s: BoxUnionSet2D, norm: NormKind, probe: DensityProbe) -> bool:
    return is_grid_dense_2d(s, norm, probe)


@dataclass(frozen=True)
class GridSequence2D:
    """Sets ``A_0, ..., A_n`` with ``A_0 = {0}`` and ``A_n = {s}``.

    Interior sets are checked for density under ``probe`` unless
    ``probe`` is ``None``.
    """

    sets: tuple
    s: Vec2
    norm: NormKind = NormKind.EUCLIDEAN
    probe: DensityProbe | None = DensityProbe()

    def __post_init__(self):
        sets = tuple(self.sets)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "s", Vec2(*self.s))
        object.__setattr__(self, "norm", NormKind.parse(self.norm))
        if len(sets) < 2:
            raise ValidationError("a sequence needs at least A_0 and A_n")
        if sets[0].singleton_value() != (0, 0):
            raise EndpointViolation("A_0 must be the single point (0, 0)")
        if sets[-1].singleton_value() != self.s:
            raise EndpointViolation(f"A_n must be the single point {tuple(self.s)}")
        if self.probe is not None:
            for i, a in enumerate(sets[1:-1], start=1):
                if not _dense(a, self.norm, self.probe):
                    raise DensityViolation(f"A_{i} misses some unit ball ({self.probe.mode} check)")

    @property
    def n(self) -> int:
        return len(self.sets) - 1

    @property
    def labeled(self) -> bool:
        return all(a.labeled for a in self.sets[1:-1])


@dataclass(frozen=True)
class ConstructionParams:
    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise ValidationError(f"m must be an integer >= 2, got {self.m!r}")

    @property
    def delta(self) -> float:
        return 3 / (self.m - 1)

    @property
    def n(self) -> int:
        return 2 * self.m + 1


def _vhq(a, c, e) -> BoxUnionSet2D:
    b, d, f = 1.0, 0.0, 1.5
    return BoxUnionSet2D(
        (
            Box(-a, a, b, INF, "N"),
            Box(-a, a, -INF, -b, "S"),
            Box(c, INF, -d, d, "E"),
            Box(-INF, -c, -d, d, "W"),
            Box(e, INF, f, INF, "QNE"),
            Box(-INF, -e, f, INF, "QNW"),
            Box(e, INF, -INF, -f, "QSE"),
            Box(-INF, -e, -INF, -f, "QSW"),
        )
    )


def reflect_diagonal(s: BoxUnionSet2D) -> BoxUnionSet2D:
    return BoxUnionSet2D(tuple(b.swapped(REFLECTED_LABEL.get(b.label, b.label)) for b in s.boxes))


def build_theorem3(params: ConstructionParams, probe: DensityProbe | None = ANALYTIC) -> GridSequence2D:
    m = params.m
    first = []
    for i in range(1, m + 1):
        # written as 3(m-i)/(m-1) so that A_m has exactly zero width
        a = 3 * (m - i) / (m - 1)
        first.append(_vhq(a, 1 + a, 1.5 + a))
    second = [reflect_diagonal(first[2 * m - i]) for i in range(m + 1, 2 * m + 1)]
    origin = BoxUnionSet2D.point(0.0, 0.0)
    return GridSequence2D((origin, *first, *second, origin), Vec2(0.0, 0.0), probe=probe)


def _require_members(seq: GridSequence2D, points: Sequence) -> None:
    for i, (a, p) in enumerate(zip(seq.sets, points)):
        if not a.contains(p, MEMBERSHIP_TOL):
            raise MembershipViolation(f"a_{i} = {tuple(p)} is not in A_{i}")


def claim1_transversal(params: ConstructionParams, seq: GridSequence2D | None = None) -> Transversal2D:
    """The two-arm transversal whose z-vectors span an equilateral triangle."""
    m = params.m
    c = 2 * math.sqrt(3) - 3
    pts = [Vec2(0.0, 0.0)]
    pts += [Vec2((m - i) / (m - 1) * c, 1.0) for i in range(1, m + 1)]
    pts += [Vec2(1.0, (i - 1) / (m - 1) * c) for i in range(1, m + 1)]
    pts.append(Vec2(0.0, 0.0))
    _require_members(seq if seq is not None else build_theorem3(params, probe=None), pts)
    return Transversal2D(tuple(pts))


def trivial_transversal(seq: GridSequence2D, norm: NormKind | None = None) -> Transversal2D:
    """Nearest points to the evenly spaced targets ``i * s / n``."""
    norm = NormKind.parse(norm or seq.norm)
    n = seq.n
    pts = [Vec2(0.0, 0.0)]
    for i in range(1, n):
        target = Vec2(i * seq.s.x / n, i * seq.s.y / n)
        q = seq.sets[i].nearest_point(target, norm)
        d = norm.length(q.x - target.x, q.y - target.y)
        if d > 1.0 + 1e-9:
            raise DensityViolation(f"A_{i} has no point within 1 of {tuple(target)} (nearest at {d})")
        pts.append(q)
    pts.append(seq.s)
    return Transversal2D(tuple(pts))


def normalize(seq: GridSequence2D) -> GridSequence2D:
    """Shift ``A_i`` by ``-i * s / n`` so the target becomes the origin.

    Exact when the inputs are :class:`fractions.Fraction`.
    """
    n = seq.n
    sx, sy = seq.s
    tx, ty = _div(sx, n), _div(sy, n)
    sets = [a.shift(-i * tx, -i * ty) for i, a in enumerate(seq.sets)]
    sets[-1] = BoxUnionSet2D.point(sx - n * tx, sy - n * ty)
    if sets[-1].singleton_value() != (0, 0):
        # rounding left a residue; the target is 0 by definition
        sets[-1] = BoxUnionSet2D.point(0.0, 0.0)
    return GridSequence2D(tuple(sets), Vec2(0.0, 0.0), seq.norm, probe=None)


def normalize_transversal(t: Transversal2D, s, n: int) -> Transversal2D:
    """The transversal of :func:`normalize` corresponding to ``t``."""
    tx, ty = _div(s[0], n), _div(s[1], n)
    pts = [Vec2(p.x - i * tx, p.y - i * ty) for i, p in enumerate(t.points)]
    return Transversal2D(tuple(pts))


def _div(v, n):
    return v / n if not isinstance(v, Fraction) else Fraction(v, n)


def lift_1d(seq1d: GridSequence1D, window: tuple[float, float] | None = None, probe: DensityProbe | None = None) -> GridSequence2D:
    """Embed a 1D sequence as ``A_i x R``.

    Lattices are expanded to their points inside ``window = (lo, hi)``
    when given and rejected otherwise.  Density carries over from the 1D
    input, so it is not rechecked unless ``probe`` is given; an expanded
    lattice is dense only inside its window.
    """
    n = seq1d.n
    sets = [BoxUnionSet2D.point(0.0, 0.0)]
    for i in range(1, n):
        boxes = []
        for part in seq1d.sets[i].parts:
            if isinstance(part, Interval):
                boxes.append(Box(part.lo, part.hi, -INF, INF))
            elif isinstance(part, Point):
                boxes.append(Box(part.at, part.at, -INF, INF))
            elif isinstance(part, Lattice):
                if window is None:
                    raise UnsupportedPrimitive(f"A_{i} contains an unbounded lattice; pass a window to expand it")
                k = math.ceil((window[0] - part.offset) / part.period)
                while (v := part.offset + k * part.period) <= window[1]:
                    boxes.append(Box(v, v, -INF, INF))
                    k += 1
        sets.append(BoxUnionSet2D(tuple(boxes)))
    sets.append(BoxUnionSet2D.point(float(seq1d.s), 0.0))
    return GridSequence2D(tuple(sets), Vec2(float(seq1d.s), 0.0), probe=probe)


def component_labels(seq: GridSequence2D, t: Transversal2D) -> list[str]:
    """Label of the component holding each interior ``a_i`` (index 1..n-1)."""
    if not seq.labeled:
        raise UnlabeledSequence("sequence boxes carry no component labels")
    out = []
    for i in range(1, seq.n):
        lab = seq.sets[i].label_of(t.points[i], MEMBERSHIP_TOL, LABEL_PRIORITY)
        if lab is None:
            raise MembershipViolation(f"a_{i} = {tuple(t.points[i])} is not in A_{i}")
        out.append(lab)
    return out


def jump_sequence(seq: GridSequence2D, t: Transversal2D) -> list[tuple[int, str, str]]:
    """Indices ``i`` where ``a_{i-1}`` and ``a_i`` lie in different component types."""
    labels = component_labels(seq, t)
    return [(i + 2, a, b) for i, (a, b) in enumerate(zip(labels, labels[1:])) if a != b]
