"""Apollonian distance, Finsler pseudo-norm, conformal density and path lengths."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .domain import (
    Domain,
    SinglePoint,
    _sup_log_ratio,
    diameter_of_inverted_complement,
    support_interval,
)
from .errors import OutsideDomainError
from .extgeom import Point, as_point

DEFAULT_ORDER = 32


def apollonian_distance(d: Domain, x1: Point, x2: Point) -> float:
    """d_U(x1, x2) as the sum of the two one-sided suprema.

    Returns ``math.inf`` when one of the suprema diverges.
    """
    x1, x2 = d.require(x1), d.require(x2)
    if len(d.obstacles) == 1 and isinstance(d.obstacles[0], SinglePoint):
        # a one-point complement never separates points
        return 0.0
    a1 = _sup_log_ratio(d, x1, x2)
    a2 = _sup_log_ratio(d, x2, x1)
    total = a1 + a2
    # each side is exact up to rounding; the sum is non-negative in exact arithmetic
    return max(total, 0.0)


def finsler_norm(d: Domain, x: Point, h) -> float:
    h = as_point(h, d.dim)
    if not np.any(h):
        d.require(x)
        return 0.0
    lo, hi = support_interval(d, x, h)
    return hi - lo


def conformal_density(d: Domain, x: Point) -> float:
    return diameter_of_inverted_complement(d, x)


@dataclass(frozen=True, eq=False)
class PathPolyline:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.array([as_point(p) for p in self.vertices], dtype=float)
        if v.ndim != 2 or v.shape[0] < 2:
            raise ValueError("a polyline needs at least two finite vertices")
        object.__setattr__(self, "vertices", v)

    @classmethod
    def of(cls, *points) -> "PathPolyline":
        return cls(np.array([as_point(p) for p in points]))

    def refined(self, factor: int) -> "PathPolyline":
        """Split every segment into ``factor`` equal pieces."""
        v = self.vertices
        t = np.linspace(0.0, 1.0, factor + 1)[:-1]
        pts = [a + s * (b - a) for a, b in zip(v[:-1], v[1:]) for s in t]
        pts.append(v[-1])
        return PathPolyline(np.array(pts))


@lru_cache(maxsize=None)
def _gauss_legendre(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def _path_integral(d: Domain, path: PathPolyline, order: int, integrand) -> float:
    if order < 2:
        raise ValueError(f"quadrature order must be at least 2, got {order}")
    for v in path.vertices:
        if not d.contains(v):
            raise OutsideDomainError(f"path vertex {v!r} is not in the domain")
    nodes, weights = _gauss_legendre(order)
    total = 0.0
    for a, b in zip(path.vertices[:-1], path.vertices[1:]):
        step = b - a
        if not np.any(step):
            continue
        for t, wt in zip(nodes, weights):
            p = a + t * step
            if not d.contains(p):
                raise OutsideDomainError(f"quadrature node {p!r} left the domain")
            total += wt * integrand(p, step)
    return total


def inner_path_length(d: Domain, path: PathPolyline, order: int = DEFAULT_ORDER) -> float:
    """Length of a polyline for the Finsler pseudo-norm (inner metric upper bound)."""
    return _path_integral(d, path, order, lambda p, step: finsler_norm(d, p, step))


def riemann_path_length(d: Domain, path: PathPolyline, order: int = DEFAULT_ORDER) -> float:
    """Length of a polyline for the conformal metric g_U(x) |dx|."""
    return _path_integral(
        d, path, order, lambda p, step: conformal_density(d, p) * float(np.linalg.norm(step))
    )


def hyperbolic_ball_distance(x, y, center=None, radius: float = 1.0) -> float:
    """Distance for ds = 2R |dx| / (R^2 - |x - x0|^2) on the ball B(x0, R)."""
    x, y = as_point(x), as_point(y)
    if center is not None:
        c = as_point(center)
        x, y = x - c, y - c
    x, y = x / radius, y / radius
    if float(x @ x) >= 1.0 or float(y @ y) >= 1.0:
        raise OutsideDomainError("hyperbolic_ball_distance needs points inside the ball")
    num = float(np.linalg.norm(x - y))
    den = math.sqrt((1.0 - float(x @ x)) * (1.0 - float(y @ y)))
    return 2.0 * math.asinh(num / den)
