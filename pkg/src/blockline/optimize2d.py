"""Numerical search for transversals of small diameter.

Nothing here certifies optimality: :func:`local_search` reports the best
transversal it found.  Randomness comes from numpy's PCG64 generator; each
restart draws from its own child of ``SeedSequence(seed)``, so results do
not depend on thread scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .construct2d import (
    ConstructionParams,
    GridSequence2D,
    claim1_transversal,
    component_labels,
    jump_sequence,
    trivial_transversal,
)
from .errors import InfeasiblePattern, ValidationError
from .geom2d import NormKind, Transversal2D, transversal_from_array

INITIALS = ("trivial", "claim1", "random")
IMPROVEMENT = 1e-12
SLATE = 16


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 20
    iterations: int = 2000
    seed: int = 0
    initial: str = "random"
    threads: int = 1

    def __post_init__(self):
        if self.initial not in INITIALS:
            raise ValidationError(f"initial must be one of {INITIALS}, got {self.initial!r}")
        if self.restarts < 1 or self.iterations < 0 or self.threads < 1:
            raise ValidationError("restarts and threads must be >= 1, iterations >= 0")


@dataclass(frozen=True)
class SearchResult:
    transversal: Transversal2D
    diameter: float
    restart: int
    history: tuple[float, ...] = ()


def _pairwise(z: np.ndarray, norm: NormKind) -> np.ndarray:
    return norm.lengths(z[:, None, :] - z[None, :, :])


def _initial(seq: GridSequence2D, norm: NormKind, how: str, rng: np.random.Generator) -> np.ndarray:
    if how == "trivial":
        return trivial_transversal(seq, norm).as_array()
    if how == "claim1":
        if seq.n % 2 == 0:
            raise ValidationError("claim1 start needs the n = 2m + 1 construction")
        return claim1_transversal(ConstructionParams((seq.n - 1) // 2), seq).as_array()
    n = seq.n
    s = np.asarray(seq.s, dtype=float)
    pts = np.zeros((n + 1, 2))
    for i in range(1, n):
        target = i * s / n + rng.uniform(-1.5, 1.5, size=2)
        pts[i] = seq.sets[i].nearest_point(target, norm)
    pts[n] = s
    return pts


def _improve(seq: GridSequence2D, norm: NormKind, pts: np.ndarray, iterations: int, rng: np.random.Generator):
    n = seq.n
    pts = pts.copy()
    z = np.diff(pts, axis=0)
    M = _pairwise(z, norm)
    best = float(M.max())
    history = [best]
    if n < 2 or iterations == 0:
        return pts, best, history
    decay = (1e-4) ** (1.0 / max(iterations - 1, 1))
    mask = np.ones(n, dtype=bool)
    for k in range(iterations):
        radius = decay**k
        i = 1 + (k % (n - 1)) if k < n - 1 else int(rng.integers(1, n))
        # moving a_i changes z_{i-1} and z_i (0-based rows i-1, i)
        mask[:] = True
        mask[i - 1] = mask[i] = False
        rest = M[np.ix_(mask, mask)]
        base = float(rest.max()) if rest.size else 0.0
        # half the slate perturbs a_i, half the midpoint of its neighbours
        centre = np.repeat([pts[i], (pts[i - 1] + pts[i + 1]) / 2], SLATE // 2, axis=0)
        targets = centre + rng.uniform(-radius, radius, size=(SLATE, 2))
        cand, _ = seq.sets[i].project_many(targets, norm)
        za = cand - pts[i - 1]
        zb = pts[i + 1] - cand
        others = z[mask]
        da = norm.lengths(za[:, None, :] - others[None, :, :])
        db = norm.lengths(zb[:, None, :] - others[None, :, :])
        dab = norm.lengths(za - zb)
        score = np.maximum(base, dab)
        if others.size:
            score = np.maximum(score, np.maximum(da.max(axis=1), db.max(axis=1)))
        j = int(np.argmin(score))
        if score[j] < best - IMPROVEMENT:
            pts[i] = cand[j]
            z[i - 1], z[i] = za[j], zb[j]
            for row in (i - 1, i):
                d = norm.lengths(z - z[row])
                M[row, :] = d
                M[:, row] = d
            best = float(M.max())
        history.append(best)
    return pts, best, history


def _threads(requested: int) -> int:
    cap = os.environ.get("BLOCKLINE_THREADS")
    if cap:
        try:
            requested = min(requested, max(1, int(cap)))
        except ValueError:
            raise ValidationError(f"BLOCKLINE_THREADS must be an integer, got {cap!r}") from None
    return max(1, requested)


def local_search(seq: GridSequence2D, norm: NormKind | str = NormKind.EUCLIDEAN, cfg: SearchConfig = SearchConfig(), keep_history: bool = False) -> SearchResult:
    """Best transversal over ``cfg.restarts`` independent improvement runs.

    Each run starts from ``cfg.initial``, then for ``cfg.iterations`` steps
    picks an index (round-robin for the first pass, then uniformly), draws
    16 perturbations of ``a_i`` within a radius decaying geometrically from
    1 to 1e-4, projects them onto ``A_i`` and keeps the best only if it
    lowers the diameter by more than 1e-12.
    """
    norm = NormKind.parse(norm)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

    def run(r: int):
        rng = np.random.Generator(np.random.PCG64(children[r]))
        start = _initial(seq, norm, cfg.initial, rng)
        pts, d, hist = _improve(seq, norm, start, cfg.iterations, rng)
        return d, r, pts, hist

    workers = _threads(cfg.threads)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(run, range(cfg.restarts)))
    else:
        results = [run(r) for r in range(cfg.restarts)]
    d, r, pts, hist = min(results, key=lambda t: (t[0], t[1]))
    t = transversal_from_array(pts)
    return SearchResult(t, t.diameter(norm), r, tuple(hist) if keep_history else ())


def _active_pair(z: np.ndarray, norm: NormKind):
    M = _pairwise(z, norm)
    iu = np.triu_indices(len(z), 1)
    flat = M[iu]
    k = int(np.argmax(flat))
    return int(iu[0][k]), int(iu[1][k]), float(flat[k])


def assignment_search(
    seq: GridSequence2D,
    pattern: Sequence[str],
    norm: NormKind | str = NormKind.EUCLIDEAN,
    iterations: int = 20000,
    step: float = 0.5,
) -> SearchResult:
    """Minimise the diameter with each ``a_i`` confined to one labelled box.

    The problem is convex; projected subgradient descent with step
    ``step / sqrt(k)`` and the single active pair (lowest indices on ties)
    as subgradient.  Returns the best iterate.
    """
    norm = NormKind.parse(norm)
    n = seq.n
    pattern = list(pattern)
    if len(pattern) != n - 1:
        raise ValidationError(f"pattern needs {n - 1} labels, got {len(pattern)}")
    lo = np.zeros((n + 1, 2))
    hi = np.zeros((n + 1, 2))
    lo[n] = hi[n] = seq.s
    for i, lab in enumerate(pattern, start=1):
        box = next((b for b in seq.sets[i].boxes if b.label == lab), None)
        if box is None:
            raise InfeasiblePattern(f"A_{i} has no component labelled {lab!r}")
        lo[i] = (box.lx, box.ly)
        hi[i] = (box.hx, box.hy)
    s = np.asarray(seq.s, dtype=float)
    pts = np.clip(np.arange(n + 1)[:, None] * s / n, lo, hi)
    best_pts, best = pts.copy(), math.inf
    for k in range(1, iterations + 1):
        z = np.diff(pts, axis=0)
        i, j, d = _active_pair(z, norm)
        if d < best:
            best, best_pts = d, pts.copy()
        if d == 0.0:
            break
        diff = z[i] - z[j]
        if norm is NormKind.EUCLIDEAN:
            g = diff / d
        else:
            axis = int(np.argmax(np.abs(diff)))
            g = np.zeros(2)
            g[axis] = np.sign(diff[axis])
        grad = np.zeros_like(pts)
        # z_r = a_{r+1} - a_r in 0-based rows
        grad[i + 1] += g
        grad[i] -= g
        grad[j + 1] -= g
        grad[j] += g
        grad[0] = grad[n] = 0.0
        pts = np.clip(pts - step / math.sqrt(k) * grad, lo, hi)
    z = np.diff(pts, axis=0)
    d = _active_pair(z, norm)[2]
    if d < best:
        best, best_pts = d, pts
    t = transversal_from_array(best_pts)
    return SearchResult(t, t.diameter(norm), 0)


def _triangle_objective(delta: float, x1, yn):
    """Triangle diameter with ``y_1 = 1``, ``z_j = (1-delta, -1+delta)``, ``x_n = -1``."""
    xj, yj = 1.0 - delta, -1.0 + delta
    d1j = np.hypot(x1 - xj, 1.0 - yj)
    djn = np.hypot(xj + 1.0, yj - yn)
    d1n = np.hypot(x1 + 1.0, 1.0 - yn)
    return np.maximum(np.maximum(d1j, djn), d1n)


def _ternary(f, lo: float, hi: float, iters: int = 200) -> float:
    for _ in range(iters):
        a = lo + (hi - lo) / 3
        b = hi - (hi - lo) / 3
        if f(a) <= f(b):
            hi = b
        else:
            lo = a
    return (lo + hi) / 2


def min_triangle_diameter(delta: float):
    """Smallest diameter of a triangle ``z_1, z_j, z_n`` subject to
    ``y_1 >= 1``, ``x_j >= 1 - delta``, ``y_j <= -1 + delta``, ``x_n <= -1``.

    The constraints are tight at the optimum, leaving ``x_1`` and ``y_n``
    free; the diameter is convex in them, so a coarse grid followed by
    nested ternary search finds the minimum.
    Returns ``(diam, z1, zj, zn)``.
    """
    if not 0.0 <= delta < 1.0:
        raise ValidationError(f"delta must lie in [0, 1), got {delta}")
    grid = np.linspace(-3.0, 3.0, 121)
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    F = _triangle_objective(delta, X, Y)
    a, b = np.unravel_index(int(np.argmin(F)), F.shape)
    step = grid[1] - grid[0]
    xlo, xhi = grid[a] - step, grid[a] + step
    ylo, yhi = grid[b] - step, grid[b] + step

    def inner(x1):
        return _ternary(lambda yn: float(_triangle_objective(delta, x1, yn)), ylo, yhi)

    x1 = _ternary(lambda x: float(_triangle_objective(delta, x, inner(x))), xlo, xhi)
    yn = inner(x1)
    diam = float(_triangle_objective(delta, x1, yn))
    return diam, (x1, 1.0), (1.0 - delta, -1.0 + delta), (-1.0, yn)


OPPOSITE = (
    ({"N->E", "W->S"}, {"E->N", "S->W"}),
    ({"N->W", "E->S"}, {"W->N", "S->E"}),
)


def facts_diagnostics(seq: GridSequence2D, t: Transversal2D, threshold: float = 2.1) -> list[str]:
    """Warnings where a transversal with diameter below ``threshold`` departs
    from the structure an optimal transversal of the construction must have.

    Only meaningful for near-optimal transversals; nothing is raised.
    """
    out = []
    if t.diameter() >= threshold:
        return out
    labels = component_labels(seq, t)
    z = t.z
    # the expected orientation starts in N and ends in E; the mirror image swaps axes
    flip = labels[0] != "N" and labels[-1] != "E"
    for i, (x, y) in enumerate(z, start=1):
        if flip:
            x, y = y, x
        if y < -1.1 or x > 1.1:
            out.append(f"z_{i} = ({x:.6g}, {y:.6g}) leaves the half-planes y >= -1.1, x <= 1.1")
    for lab in ("QNW", "QSE"):
        hits = [i for i, l in enumerate(labels, start=1) if l == lab]
        if hits:
            out.append(f"a_i visits {lab} at indices {hits}")
    kinds = {f"{a}->{b}" for _, a, b in jump_sequence(seq, t)}
    for first, second in OPPOSITE:
        if kinds & first and kinds & second:
            out.append(f"opposite jumps {sorted(kinds & first)} and {sorted(kinds & second)}")
    return out
