"""Planar primitives: norms, unions of axis-aligned boxes, diameters.

Boxes may be unbounded (``+-inf`` bounds) or degenerate (segments, points),
so halflines and single points are boxes too.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import EmptySet, ValidationError

INF = math.inf
MEMBERSHIP_TOL = 1e-9


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other):  # type: ignore[override]
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def scale(self, c) -> "Vec2":
        return Vec2(self.x * c, self.y * c)

    def swapped(self) -> "Vec2":
        return Vec2(self.y, self.x)


class NormKind(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    MAXIMUM = "linf"

    @classmethod
    def parse(cls, value) -> "NormKind":
        if isinstance(value, NormKind):
            return value
        aliases = {"euclidean": cls.EUCLIDEAN, "l2": cls.EUCLIDEAN, "linf": cls.MAXIMUM, "max": cls.MAXIMUM, "maximum": cls.MAXIMUM}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValidationError(f"unknown norm {value!r}; use euclidean or linf") from None

    def length(self, dx, dy) -> float:
        if self is NormKind.EUCLIDEAN:
            return math.hypot(dx, dy)
        return max(abs(dx), abs(dy))

    def lengths(self, d: np.ndarray) -> np.ndarray:
        """Norms along the last axis (size 2) of ``d``."""
        if self is NormKind.EUCLIDEAN:
            return np.hypot(d[..., 0], d[..., 1])
        return np.abs(d).max(axis=-1)


@dataclass(frozen=True)
class Box:
    """Closed box ``[lx, hx] x [ly, hy]``; bounds may be infinite."""

    lx: float
    hx: float
    ly: float
    hy: float
    label: str | None = None

    def __post_init__(self):
        for v in (self.lx, self.hx, self.ly, self.hy):
            if isinstance(v, float) and math.isnan(v):
                raise ValidationError("box bounds must not be NaN")
        if self.lx > self.hx or self.ly > self.hy:
            raise ValidationError(f"box needs lx <= hx and ly <= hy, got {self}")
        if self.lx == INF or self.hx == -INF or self.ly == INF or self.hy == -INF:
            raise ValidationError("box must contain a point of the plane")

    @classmethod
    def point(cls, x, y, label=None) -> "Box":
        return cls(x, x, y, y, label)

    def clamp(self, p) -> Vec2:
        return Vec2(min(max(p[0], self.lx), self.hx), min(max(p[1], self.ly), self.hy))

    def contains(self, p, tol: float = MEMBERSHIP_TOL) -> bool:
        return self.lx - tol <= p[0] <= self.hx + tol and self.ly - tol <= p[1] <= self.hy + tol

    def shift(self, dx, dy) -> "Box":
        return replace(self, lx=self.lx + dx, hx=self.hx + dx, ly=self.ly + dy, hy=self.hy + dy)

    def swapped(self, label: str | None = None) -> "Box":
        return Box(self.ly, self.hy, self.lx, self.hx, label)

    def mirrored_x(self) -> "Box":
        return Box(-self.hx, -self.lx, self.ly, self.hy, self.label)

    def mirrored_y(self) -> "Box":
        return Box(self.lx, self.hx, -self.hy, -self.ly, self.label)

    @property
    def bounds(self) -> tuple:
        return (self.lx, self.hx, self.ly, self.hy)


@dataclass(frozen=True)
class BoxUnionSet2D:
    boxes: tuple[Box, ...]
    _arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        boxes = tuple(self.boxes)
        object.__setattr__(self, "boxes", boxes)
        arr = np.array([[float(v) for v in b.bounds] for b in boxes], dtype=float).reshape(-1, 4)
        object.__setattr__(self, "_arr", arr)

    @classmethod
    def point(cls, x, y) -> "BoxUnionSet2D":
        return cls((Box.point(x, y),))

    @classmethod
    def plane(cls) -> "BoxUnionSet2D":
        return cls((Box(-INF, INF, -INF, INF),))

    @property
    def labeled(self) -> bool:
        return bool(self.boxes) and all(b.label is not None for b in self.boxes)

    def singleton_value(self) -> Vec2 | None:
        if not self.boxes:
            return None
        b0 = self.boxes[0]
        if all(b.lx == b.hx == b0.lx and b.ly == b.hy == b0.ly for b in self.boxes):
            return Vec2(b0.lx, b0.ly)
        return None

    def contains(self, p, tol: float = MEMBERSHIP_TOL) -> bool:
        return any(b.contains(p, tol) for b in self.boxes)

    def shift(self, dx, dy) -> "BoxUnionSet2D":
        return BoxUnionSet2D(tuple(b.shift(dx, dy) for b in self.boxes))

    def nearest_point(self, p, norm: NormKind = NormKind.EUCLIDEAN) -> Vec2:
        """Closest member of the set; ties go to the lowest box index."""
        if not self.boxes:
            raise EmptySet("nearest point of an empty set")
        norm = NormKind.parse(norm)
        best, best_d = None, INF
        for b in self.boxes:
            q = b.clamp(p)
            d = norm.length(p[0] - q[0], p[1] - q[1])
            if d < best_d or best is None:
                best, best_d = q, d
        return best

    def distance(self, p, norm: NormKind = NormKind.EUCLIDEAN) -> float:
        q = self.nearest_point(p, norm)
        return NormKind.parse(norm).length(p[0] - q[0], p[1] - q[1])

    def project_many(self, pts: np.ndarray, norm: NormKind = NormKind.EUCLIDEAN) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised :meth:`nearest_point`: returns ``(nearest, distance)``."""
        if not self.boxes:
            raise EmptySet("nearest point of an empty set")
        norm = NormKind.parse(norm)
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        a = self._arr
        cx = np.clip(pts[:, None, 0], a[None, :, 0], a[None, :, 1])
        cy = np.clip(pts[:, None, 1], a[None, :, 2], a[None, :, 3])
        cand = np.stack([cx, cy], axis=-1)
        d = norm.lengths(pts[:, None, :] - cand)
        k = np.argmin(d, axis=1)
        rows = np.arange(len(pts))
        return cand[rows, k], d[rows, k]

    def label_of(self, p, tol: float = MEMBERSHIP_TOL, priority: Sequence[str] | None = None) -> str | None:
        """Label of a containing box, by ``priority`` order then box order."""
        hits = [b.label for b in self.boxes if b.contains(p, tol)]
        if not hits:
            return None
        if priority:
            rank = {lab: i for i, lab in enumerate(priority)}
            hits.sort(key=lambda lab: rank.get(lab, len(rank)))
        return hits[0]

    def labels(self) -> tuple:
        return tuple(b.label for b in self.boxes)


@dataclass(frozen=True)
class DensityProbe:
    """How :func:`is_grid_dense_2d` decides.

    ``sampled`` checks a lattice of points with spacing ``h`` inside
    ``window = (xmin, xmax, ymin, ymax)``; it can miss gaps between samples
    or outside the window.  ``analytic`` decides for the whole plane.
    """

    mode: str = "sampled"
    window: tuple = (-5.0, 5.0, -5.0, 5.0)
    h: float = 0.05

    def __post_init__(self):
        if self.mode not in ("sampled", "analytic"):
            raise ValidationError(f"unknown density mode {self.mode!r}")
        if self.mode == "sampled" and not self.h > 0:
            raise ValidationError("sampling step must be positive")


ANALYTIC = DensityProbe("analytic")


def sampled_max_distance(s: BoxUnionSet2D, norm: NormKind, window, h: float) -> float:
    x0, x1, y0, y1 = window
    xs = np.arange(x0, x1 + h / 2, h)
    ys = np.arange(y0, y1 + h / 2, h)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    worst = 0.0
    for chunk in np.array_split(pts, max(1, len(pts) // 20000)):
        _, d = s.project_many(chunk, norm)
        worst = max(worst, float(d.max()))
    return worst


def is_grid_dense_2d(s: BoxUnionSet2D, norm: NormKind = NormKind.EUCLIDEAN, probe: DensityProbe | None = None) -> bool:
    """Whether every unit ball of ``norm`` meets ``s``."""
    norm = NormKind.parse(norm)
    probe = probe or DensityProbe()
    if not s.boxes:
        return False
    if probe.mode == "sampled":
        return sampled_max_distance(s, norm, probe.window, probe.h) <= 1.0 + 1e-12
    if norm is NormKind.MAXIMUM:
        return _covered_by_offsets(s, 1.0)
    return farthest_distance(s) <= 1.0 + 1e-9


def _covered_by_offsets(s: BoxUnionSet2D, r: float) -> bool:
    """Exact test that the max-norm ``r``-neighbourhoods of the boxes cover the plane."""
    grown = s._arr + np.array([-r, r, -r, r])
    xs = sorted({v for v in grown[:, :2].ravel() if math.isfinite(v)})
    ys = sorted({v for v in grown[:, 2:].ravel() if math.isfinite(v)})

    def reps(vals):
        if not vals:
            return [0.0]
        return [vals[0] - 1.0] + [(a + b) / 2 for a, b in zip(vals, vals[1:])] + [vals[-1] + 1.0]

    for x in reps(xs):
        for y in reps(ys):
            inside = (grown[:, 0] <= x) & (x <= grown[:, 1]) & (grown[:, 2] <= y) & (y <= grown[:, 3])
            if not inside.any():
                return False
    return True


# -- Euclidean farthest point -------------------------------------------------
#
# The distance to a finite union of convex pieces has its local maxima where
# at least three pieces are equidistant (or on the boundary of the search
# domain, or at infinity along a strip).  Near such a point the distance to
# each piece is the distance to one corner or to one edge line, so its square
# is the quadric  A x^2 + B y^2 + C x + D y + E  with A, B in {0, 1}.  All
# triple points therefore come from intersecting two such quadrics, which
# reduces to a polynomial of degree at most four.


def _features(b: Sequence[float]) -> list[tuple]:
    lx, hx, ly, hy = b
    feats = []
    for x in {lx, hx}:
        for y in {ly, hy}:
            if math.isfinite(x) and math.isfinite(y):
                feats.append((1.0, 1.0, -2 * x, -2 * y, x * x + y * y))
    for x in {lx, hx}:
        if math.isfinite(x):
            feats.append((1.0, 0.0, -2 * x, 0.0, x * x))
    for y in {ly, hy}:
        if math.isfinite(y):
            feats.append((0.0, 1.0, 0.0, -2 * y, y * y))
    return feats


def _real_roots(coeffs_low_to_high) -> list[float]:
    c = list(coeffs_low_to_high)
    while c and abs(c[-1]) < 1e-14:
        c.pop()
    if len(c) <= 1:
        return []
    roots = np.polynomial.polynomial.polyroots(c)
    return [float(r.real) for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r.real))]


def _line_quadric(lin, q) -> list[tuple]:
    _, _, C, D, E = lin
    A2, B2, C2, D2, E2 = q
    out = []
    if abs(D) >= abs(C) and D != 0:
        m, k = -C / D, -E / D  # y = m x + k
        for x in _real_roots([B2 * k * k + D2 * k + E2, 2 * B2 * m * k + C2 + D2 * m, A2 + B2 * m * m]):
            out.append((x, m * x + k))
    elif C != 0:
        m, k = -D / C, -E / C  # x = m y + k
        for y in _real_roots([A2 * k * k + C2 * k + E2, 2 * A2 * m * k + C2 * m + D2, A2 * m * m + B2]):
            out.append((m * y + k, y))
    return out


def _solve_quadrics(e1, e2) -> list[tuple]:
    """Real solutions of two equations ``A x^2 + B y^2 + C x + D y + E = 0``."""
    lin1 = e1[0] == 0 and e1[1] == 0
    lin2 = e2[0] == 0 and e2[1] == 0
    if lin1 and lin2:
        det = e1[2] * e2[3] - e1[3] * e2[2]
        if det == 0:
            return []
        x = (-e1[4] * e2[3] + e1[3] * e2[4]) / det
        y = (-e1[2] * e2[4] + e1[4] * e2[2]) / det
        return [(x, y)]
    if lin1:
        return _line_quadric(e1, e2)
    if lin2:
        return _line_quadric(e2, e1)
    if e1[0] == 0 and e2[0] == 0:
        e3 = tuple(e2[1] * a - e1[1] * b for a, b in zip(e1, e2))
    else:
        e3 = tuple(e2[0] * a - e1[0] * b for a, b in zip(e1, e2))
    if all(v == 0 for v in e3):
        return []
    if e3[0] == 0 and e3[1] == 0:
        return _line_quadric(e3, e1)
    A1, B1, C1, D1, E1 = e1
    A3, B3, C3, D3, E3 = e3
    P = np.polynomial.Polynomial
    out = []
    if A3 == 0:
        # B3 y^2 + C3 x + D3 y + E3 = 0
        if C3 != 0:
            xy = P([-E3 / C3, -D3 / C3, -B3 / C3])
            poly = A1 * xy * xy + P([E1, D1, B1]) + C1 * xy
            for y in _real_roots(poly.coef):
                out.append((float(xy(y)), y))
        else:
            for y in _real_roots([E3, D3, B3]):
                for x in _real_roots([B1 * y * y + D1 * y + E1, C1, A1]):
                    out.append((x, y))
    else:
        # A3 x^2 + C3 x + D3 y + E3 = 0
        if D3 != 0:
            yx = P([-E3 / D3, -C3 / D3, -A3 / D3])
            poly = B1 * yx * yx + P([E1, C1, A1]) + D1 * yx
            for x in _real_roots(poly.coef):
                out.append((x, float(yx(x))))
        else:
            for x in _real_roots([E3, C3, A3]):
                for y in _real_roots([A1 * x * x + C1 * x + E1, D1, B1]):
                    out.append((x, y))
    return out


def _is_axis_symmetric(s: BoxUnionSet2D) -> bool:
    key = sorted(b.bounds for b in s.boxes)
    return key == sorted(b.mirrored_x().bounds for b in s.boxes) and key == sorted(b.mirrored_y().bounds for b in s.boxes)


_FAR = 1e6


def farthest_distance(s: BoxUnionSet2D) -> float:
    """Supremum over the plane of the Euclidean distance to ``s``.

    Returns ``inf`` when some region of the plane is unboundedly far.  For
    sets symmetric about both axes only the closed first quadrant is
    searched, with the axes as domain boundary.
    """
    if not s.boxes:
        return INF
    symmetric = _is_axis_symmetric(s)
    if symmetric:
        pieces = []
        for b in s.boxes:
            lx, hx, ly, hy = (float(v) for v in b.bounds)
            if hx >= 0 and hy >= 0:
                pieces.append((max(lx, 0.0), hx, max(ly, 0.0), hy))
        pieces = sorted(set(pieces))
    else:
        pieces = sorted({tuple(float(v) for v in b.bounds) for b in s.boxes})
    feats = [_features(p) for p in pieces]

    cands = [(0.0, 0.0)]
    for i, j, k in itertools.combinations(range(len(pieces)), 3):
        for f1 in feats[i]:
            for f2 in feats[j]:
                e1 = tuple(a - b for a, b in zip(f1, f2))
                for f3 in feats[k]:
                    e2 = tuple(a - b for a, b in zip(f2, f3))
                    cands.extend(_solve_quadrics(e1, e2))
    if symmetric:
        for i, j in itertools.combinations(range(len(pieces)), 2):
            for f1 in feats[i]:
                for f2 in feats[j]:
                    d = [a - b for a, b in zip(f1, f2)]
                    cands.extend((x, 0.0) for x in _real_roots([d[4], d[2], d[0]]))
                    cands.extend((0.0, y) for y in _real_roots([d[4], d[3], d[1]]))
    xs = sorted({v for p in pieces for v in p[:2] if math.isfinite(v)})
    ys = sorted({v for p in pieces for v in p[2:] if math.isfinite(v)})
    signs = (1.0,) if symmetric else (1.0, -1.0)
    for a, b in itertools.combinations(xs, 2):
        cands.extend(((a + b) / 2, sg * _FAR) for sg in signs)
    for a, b in itertools.combinations(ys, 2):
        cands.extend((sg * _FAR, (a + b) / 2) for sg in signs)
    span = math.pi / 2 if symmetric else 2 * math.pi
    for th in np.linspace(0.0, span, 721):
        cands.append((_FAR * math.cos(th), _FAR * math.sin(th)))

    pts = np.array(cands, dtype=float)
    pts = pts[np.all(np.isfinite(pts), axis=1)]
    if symmetric:
        pts = np.abs(pts)
    _, d = s.project_many(pts, NormKind.EUCLIDEAN)
    worst = float(d.max())
    return INF if worst > _FAR / 1e3 else worst


def diameter(zs: Sequence, norm: NormKind = NormKind.EUCLIDEAN) -> float:
    """Largest pairwise distance, by the exact O(n^2) scan.

    Coordinates given as :class:`fractions.Fraction` are compared exactly and
    only the final square root is rounded.
    """
    norm = NormKind.parse(norm)
    zs = list(zs)
    if not zs:
        raise ValidationError("diameter of an empty list")
    if any(isinstance(c, Fraction) for z in zs for c in z):
        best = Fraction(0)
        for (ax, ay), (bx, by) in itertools.combinations(zs, 2):
            dx, dy = Fraction(ax) - Fraction(bx), Fraction(ay) - Fraction(by)
            v = dx * dx + dy * dy if norm is NormKind.EUCLIDEAN else max(abs(dx), abs(dy))
            best = max(best, v)
        return math.sqrt(best) if norm is NormKind.EUCLIDEAN else float(best)
    arr = np.asarray(zs, dtype=float).reshape(-1, 2)
    d = norm.lengths(arr[:, None, :] - arr[None, :, :])
    return float(d.max())


@dataclass(frozen=True)
class Transversal2D:
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(Vec2(*p) for p in self.points))

    @property
    def n(self) -> int:
        return len(self.points) - 1

    @property
    def z(self) -> tuple:
        return tuple(b - a for a, b in zip(self.points, self.points[1:]))

    def diameter(self, norm: NormKind = NormKind.EUCLIDEAN) -> float:
        return diameter(self.z, norm)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)


def transversal_from_array(arr: np.ndarray) -> Transversal2D:
    return Transversal2D(tuple(Vec2(float(x), float(y)) for x, y in np.asarray(arr)))


def boxes_from_bounds(rows: Iterable[Sequence[float]], labels: Iterable[str | None] | None = None) -> BoxUnionSet2D:
    rows = list(rows)
    labels = list(labels) if labels is not None else [None] * len(rows)
    return BoxUnionSet2D(tuple(Box(*r, label=lab) for r, lab in zip(rows, labels)))
