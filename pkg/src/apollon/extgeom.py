"""Points of the one-point completion of R^n, generalized spheres and regions.

A finite point is a 1-D float64 numpy array; the point at infinity is the
singleton :data:`INF`.  Any norm factor involving ``INF`` in a cross-ratio
is replaced by 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .errors import DimensionError


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Point = Union[np.ndarray, _Infinity]


def is_inf(x) -> bool:
    return x is INF


def as_point(x, dim: int | None = None) -> Point:
    """Coerce ``x`` to an extended point; accepts ``INF``, ``"inf"`` or a sequence."""
    if x is INF or (isinstance(x, str) and x.lower() in ("inf", "infinity")):
        return INF
    p = np.array(x, dtype=float).reshape(-1)
    if p.size == 0:
        raise DimensionError("a point needs at least one coordinate")
    if not math.isfinite(p.sum()) and not np.all(np.isfinite(p)):
        raise ValueError(f"non-finite coordinates in {x!r}; use INF for the point at infinity")
    if dim is not None and p.size != dim:
        raise DimensionError(f"expected dimension {dim}, got {p.size}")
    return p


def same_point(x: Point, y: Point) -> bool:
    if x is INF or y is INF:
        return x is y
    return bool(np.array_equal(x, y))


def _check_dims(*pts: Point) -> int | None:
    dims = {p.shape[0] for p in pts if p is not INF}
    if len(dims) > 1:
        raise DimensionError(f"mixed dimensions {sorted(dims)}")
    return dims.pop() if dims else None


def chordal_distance(x: Point, y: Point) -> float:
    x, y = as_point(x), as_point(y)
    _check_dims(x, y)
    if x is INF and y is INF:
        return 0.0
    if x is INF:
        x, y = y, x
    if y is INF:
        return 1.0 / math.sqrt(1.0 + float(x @ x))
    return float(np.linalg.norm(x - y)) / (
        math.sqrt(1.0 + float(x @ x)) * math.sqrt(1.0 + float(y @ y))
    )


def _dist_or_one(a: Point, b: Point) -> float:
    if a is INF or b is INF:
        return 1.0
    return float(np.linalg.norm(a - b))


def cross_ratio(x1: Point, x2: Point, u1: Point, u2: Point) -> float:
    """[x1, x2; u1, u2] = |x2-u1| |x1-u2| / (|x1-u1| |x2-u2|)."""
    x1, x2, u1, u2 = (as_point(p) for p in (x1, x2, u1, u2))
    _check_dims(x1, x2, u1, u2)
    for a in (x1, x2):
        for b in (u1, u2):
            if same_point(a, b):
                raise ValueError("the pairs {x1, x2} and {u1, u2} must be disjoint")
    num = _dist_or_one(x2, u1) * _dist_or_one(x1, u2)
    den = _dist_or_one(x1, u1) * _dist_or_one(x2, u2)
    return num / den


# -- generalized spheres and regions -----------------------------------------


@dataclass(frozen=True, eq=False)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError(f"sphere radius must be positive, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def level(self, x: np.ndarray) -> float:
        """Signed distance to the sphere, negative inside."""
        return float(np.linalg.norm(x - self.center)) - self.radius


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """The set ``<normal, x> = offset`` with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = as_point(self.normal)
        norm = float(np.linalg.norm(n))
        if norm == 0:
            raise ValueError("hyperplane normal must be non-zero")
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"hyperplane normal must be a unit vector (norm {norm})")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_vector(cls, normal, offset: float) -> "Hyperplane":
        n = as_point(normal)
        norm = float(np.linalg.norm(n))
        return cls(n / norm, offset / norm)

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def level(self, x: np.ndarray) -> float:
        return float(self.normal @ x) - self.offset


GeneralizedSphere = Union[Sphere, Hyperplane]
Side = Literal["inside", "outside"]


@dataclass(frozen=True, eq=False)
class Region:
    """One side of a generalized sphere.

    ``inside`` is the bounded ball for a sphere and ``<n, x> < offset`` for a
    hyperplane.  The outside of a sphere always contains INF (it is an
    interior point there); a half-space contains INF only when closed.
    """

    surface: GeneralizedSphere
    side: Side = "inside"
    closed: bool = False

    def __post_init__(self):
        if self.side not in ("inside", "outside"):
            raise ValueError(f"side must be 'inside' or 'outside', got {self.side!r}")

    @property
    def dim(self) -> int:
        return self.surface.dim

    @property
    def is_ball(self) -> bool:
        return isinstance(self.surface, Sphere) and self.side == "inside"

    def contains(self, x: Point) -> bool:
        x = as_point(x)
        if x is INF:
            if isinstance(self.surface, Sphere):
                return self.side == "outside"
            return self.closed
        if x.shape[0] != self.dim:
            raise DimensionError(f"point of dimension {x.shape[0]} against region of dimension {self.dim}")
        lv = self.surface.level(x)
        if self.side == "outside":
            lv = -lv
        return lv <= 0 if self.closed else lv < 0

    def witness(self) -> Point:
        """A deterministic point strictly interior to the region."""
        s = self.surface
        if isinstance(s, Sphere):
            return s.center.copy() if self.side == "inside" else INF
        step = max(1.0, abs(s.offset))
        sign = -1.0 if self.side == "inside" else 1.0
        return s.normal * (s.offset + sign * step)

    def __repr__(self):
        s = self.surface
        if isinstance(s, Sphere):
            desc = f"Sphere(center={s.center.tolist()}, radius={s.radius!r})"
        else:
            desc = f"Hyperplane(normal={s.normal.tolist()}, offset={s.offset!r})"
        return f"Region({desc}, side={self.side!r}, closed={self.closed})"


def apollonian_ball(a: Point, b: Point, alpha: float) -> Region:
    """The open region ``{u : |a-u| / |b-u| < alpha}``.

    A ball around ``a`` for alpha < 1, the complement of a closed ball around
    ``b`` for alpha > 1 and the half-space of points nearer to ``a`` for
    alpha = 1.
    """
    a, b = as_point(a), as_point(b)
    if a is INF or b is INF:
        raise ValueError("apollonian_ball needs finite points")
    _check_dims(a, b)
    if same_point(a, b):
        raise ValueError("apollonian_ball needs distinct points")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    a2 = alpha * alpha
    if a2 == 1.0:
        diff = b - a
        return Region(Hyperplane.from_vector(diff, 0.5 * float(b @ b - a @ a)), "inside")
    center = (a - a2 * b) / (1.0 - a2)
    radius = alpha * float(np.linalg.norm(a - b)) / abs(1.0 - a2)
    return Region(Sphere(center, radius), "inside" if alpha < 1 else "outside")
