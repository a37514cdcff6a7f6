"""Conformal iterated function systems: cylinder covers of the limit set,
the dimension upper bound and an empirical box-counting estimate."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conformal import ConformalMap, compose, image_region, inverse, unit_inversion, translation
from .contraction import (
    NestedPair,
    ball_boundary,
    ball_region,
    birkhoff_coefficient,
    in_gamma,
    inversive_distance,
    diameter_from_coefficient,
)
from .domain import ClosedBall, ClosedBallExterior, ClosedHalfSpace
from .errors import UnsupportedError
from .extgeom import Region

DEFAULT_CELL_CAP = 10**6


class IfsSystem:
    """Generators gamma_1..gamma_k mapping V into U, with finite certified Delta."""

    def __init__(self, nesting: NestedPair, generators: Sequence[ConformalMap]):
        if not generators:
            raise ValueError("an IFS needs at least one generator")
        if not nesting.certified or not math.isfinite(nesting.delta):
            raise UnsupportedError("an IFS needs a finite closed-form diameter of U in V")
        if ball_boundary(nesting.outer) is None:
            raise UnsupportedError("the outer domain must be a generalized ball")
        for i, g in enumerate(generators):
            if not in_gamma(g, nesting):
                raise ValueError(f"generator {i} does not map V into U")
        self.nesting = nesting
        self.generators = list(generators)

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def delta(self) -> float:
        return self.nesting.delta

    @property
    def coefficient(self) -> float:
        return self.nesting.coefficient

    def dimension_bound(self) -> float:
        return dimension_bound(self.k, self.delta)


def normalizer(system: IfsSystem) -> ConformalMap:
    """An inversion sending a point q outside Cl V to INF.

    q is INF itself when V's complement already contains a neighbourhood
    of INF; otherwise it is the center of the largest ball in V's complement.
    """
    V = system.nesting.outer
    dim = V.dim
    if any(isinstance(ob, ClosedBallExterior) for ob in V.obstacles):
        return ConformalMap.identity(dim)
    balls = [ob for ob in V.obstacles if isinstance(ob, ClosedBall)]
    if balls:
        q = max(balls, key=lambda ob: ob.radius).center
    else:
        half = next((ob for ob in V.obstacles if isinstance(ob, ClosedHalfSpace)), None)
        if half is None:
            raise UnsupportedError("the complement of V has no interior point to send to infinity")
        q = half.normal * (half.offset + 1.0)
    return compose(unit_inversion(dim), translation(-q))


@dataclass
class CylinderCover:
    depth: int
    words: list[tuple[int, ...]]
    centers: np.ndarray
    radii: np.ndarray
    apollonian_diameters: np.ndarray
    bound: float
    outer_center: np.ndarray
    outer_radius: float

    def __len__(self):
        return len(self.words)

    def word_labels(self) -> list[str]:
        sep = "" if max((max(w) for w in self.words), default=0) < 10 else "."
        return [sep.join(str(i) for i in w) for w in self.words]


def cell_diameter_bound(delta: float, depth: int) -> float:
    """Delta * tanh(Delta/4)^(depth-1)."""
    return delta * birkhoff_coefficient(delta) ** (depth - 1)


def limit_cover(system: IfsSystem, depth: int, cap: int = DEFAULT_CELL_CAP) -> CylinderCover:
    """All depth-n cylinder balls gamma_w(V), in normalized coordinates.

    Words are enumerated lexicographically.  Each cell also carries its
    Apollonian diameter inside V, computed in closed form.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if system.k**depth > cap:
        raise ValueError(f"{system.k}^{depth} cells exceed the cap of {cap}")
    N = normalizer(system)
    N_inv = inverse(N)
    v_region = image_region(N, ball_region(system.nesting.outer))
    if not v_region.is_ball:
        raise UnsupportedError(f"normalized V is not a bounded ball: {v_region!r}")
    gens = [compose(N, compose(g, N_inv)) for g in system.generators]

    cells: list[Region] = [v_region]
    words: list[tuple[int, ...]] = [()]
    for _ in range(depth):
        cells = [image_region(g, r) for g in gens for r in cells]
        words = [(i,) + w for i in range(system.k) for w in words]
    for r in cells:
        if not r.is_ball:
            raise ArithmeticError(f"cylinder image is not a bounded ball: {r!r}")

    v_sphere = v_region.surface
    apo = np.array([
        diameter_from_coefficient(_ratio_from(inversive_distance(r.surface, v_sphere))) for r in cells
    ])
    return CylinderCover(
        depth=depth,
        words=words,
        centers=np.array([r.surface.center for r in cells]),
        radii=np.array([r.surface.radius for r in cells]),
        apollonian_diameters=apo,
        bound=cell_diameter_bound(system.delta, depth),
        outer_center=v_sphere.center,
        outer_radius=v_sphere.radius,
    )


def _ratio_from(delta_inv: float) -> float:
    if delta_inv <= 1.0:
        return 1.0
    return 1.0 / (delta_inv + math.sqrt((delta_inv - 1.0) * (delta_inv + 1.0)))


def dimension_bound(k: int, delta: float) -> float:
    """log k / (-log tanh(Delta/4))."""
    if k < 1:
        raise ValueError("need at least one generator")
    if delta < 0 or math.isinf(delta):
        raise ValueError(f"dimension bound needs a finite non-negative diameter, got {delta}")
    if k == 1:
        return 0.0
    theta = birkhoff_coefficient(delta)
    if theta == 0.0:
        return 0.0
    return math.log(k) / -math.log(theta)


@dataclass
class BoxCount:
    scales: np.ndarray
    counts: np.ndarray
    slope: float
    residual: float


def box_count(points, scales: Sequence[float]) -> BoxCount:
    """Occupied axis-aligned boxes per scale and the fitted log-log slope."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("no points to count")
    r = np.asarray(sorted(set(float(s) for s in scales)), dtype=float)
    if r.size < 2 or np.any(r <= 0):
        raise ValueError("need at least two distinct positive scales")
    if r[-1] / r[0] < 10.0 * (1 - 1e-12):
        raise ValueError("scales must span at least one decade")
    counts = np.array([np.unique(np.floor(pts / s).astype(np.int64), axis=0).shape[0] for s in r])
    x, y = np.log(1.0 / r), np.log(counts)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return BoxCount(r, counts, float(slope), residual)
