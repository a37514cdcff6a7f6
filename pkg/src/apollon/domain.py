"""Domains U given by their complements, and the supremum queries over U^c.

Every query is localized at a finite point x of U through the inversion
u -> (u - x) / |u - x|^2, which maps U^c onto a finite union of closed balls
and points W(x).  Apollonian quantities then reduce to farthest-point,
support-function and diameter computations on W(x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .conformal import ConformalMap, image_region
from .errors import DimensionError, OutsideDomainError, UnsupportedError
from .extgeom import INF, Hyperplane, Point, Region, Sphere, as_point

# region_inside margin; touching configurations are rejected for closed regions
CONTAINMENT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ClosedBall:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError(f"obstacle radius must be positive, got {self.radius}")

    @property
    def dim(self):
        return self.center.shape[0]

    def contains(self, x):
        return x is not INF and float(np.linalg.norm(x - self.center)) <= self.radius

    def distance(self, x):
        return float(np.linalg.norm(x - self.center)) - self.radius

    def farthest(self, x):
        return float(np.linalg.norm(x - self.center)) + self.radius

    def inverted(self, x):
        c = self.center - x
        k = float(c @ c) - self.radius**2
        return c / k, self.radius / k

    def region(self) -> Region:
        return Region(Sphere(self.center, self.radius), "inside", closed=True)


@dataclass(frozen=True, eq=False)
class ClosedBallExterior:
    """``{|x - center| >= radius}`` together with INF."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError(f"obstacle radius must be positive, got {self.radius}")

    @property
    def dim(self):
        return self.center.shape[0]

    def contains(self, x):
        return x is INF or float(np.linalg.norm(x - self.center)) >= self.radius

    def distance(self, x):
        return self.radius - float(np.linalg.norm(x - self.center))

    def farthest(self, x):
        return math.inf

    def inverted(self, x):
        c = self.center - x
        k = float(c @ c) - self.radius**2
        return c / k, self.radius / -k

    def region(self) -> Region:
        return Region(Sphere(self.center, self.radius), "outside", closed=True)


@dataclass(frozen=True, eq=False)
class ClosedHalfSpace:
    """``{<normal, x> >= offset}`` together with INF."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = as_point(self.normal)
        norm = float(np.linalg.norm(n))
        if norm == 0:
            raise ValueError("half-space normal must be non-zero")
        object.__setattr__(self, "normal", n / norm)
        object.__setattr__(self, "offset", float(self.offset) / norm)

    @property
    def dim(self):
        return self.normal.shape[0]

    def contains(self, x):
        return x is INF or float(self.normal @ x) >= self.offset

    def distance(self, x):
        return self.offset - float(self.normal @ x)

    def farthest(self, x):
        return math.inf

    def inverted(self, x):
        o = self.offset - float(self.normal @ x)
        return self.normal / (2.0 * o), 1.0 / (2.0 * o)

    def region(self) -> Region:
        return Region(Hyperplane(self.normal, self.offset), "outside", closed=True)


@dataclass(frozen=True, eq=False)
class SinglePoint:
    point: Point

    def __post_init__(self):
        object.__setattr__(self, "point", as_point(self.point))

    @property
    def dim(self):
        return None if self.point is INF else self.point.shape[0]

    def contains(self, x):
        if x is INF or self.point is INF:
            return x is self.point
        return bool(np.array_equal(x, self.point))

    def distance(self, x):
        return math.inf if self.point is INF else float(np.linalg.norm(x - self.point))

    def farthest(self, x):
        return math.inf if self.point is INF else float(np.linalg.norm(x - self.point))

    def inverted(self, x):
        if self.point is INF:
            return np.zeros_like(x), 0.0
        c = self.point - x
        return c / float(c @ c), 0.0


Obstacle = Union[ClosedBall, ClosedBallExterior, ClosedHalfSpace, SinglePoint]


def obstacle_from_region(r: Region) -> Obstacle:
    """Convert a closed region back into an obstacle."""
    s = r.surface
    if isinstance(s, Sphere):
        return ClosedBall(s.center, s.radius) if r.side == "inside" else ClosedBallExterior(s.center, s.radius)
    if r.side == "outside":
        return ClosedHalfSpace(s.normal, s.offset)
    return ClosedHalfSpace(-s.normal, -s.offset)


def transform_obstacle(m: ConformalMap, ob: Obstacle) -> Obstacle:
    if isinstance(ob, SinglePoint):
        return SinglePoint(m(ob.point))
    return obstacle_from_region(image_region(m, ob.region()))


@dataclass(frozen=True, eq=False)
class InvertedComplement:
    """W(x) as arrays: piece ``i`` is the closed ball (centers[i], radii[i]);
    radius 0 marks a single point."""

    x: np.ndarray
    centers: np.ndarray
    radii: np.ndarray

    def __len__(self):
        return self.radii.shape[0]


class Domain:
    """An open set U, the complement of a finite union of closed obstacles."""

    def __init__(self, obstacles: Sequence[Obstacle], witness: Point, dim: int | None = None):
        self.obstacles: tuple[Obstacle, ...] = tuple(obstacles)
        if not self.obstacles:
            raise ValueError("a domain needs at least one obstacle (U must be a proper subset)")
        dims = {ob.dim for ob in self.obstacles if ob.dim is not None}
        w = as_point(witness)
        if w is not INF:
            dims.add(w.shape[0])
        if dim is not None:
            dims.add(dim)
        if len(dims) != 1:
            raise DimensionError(f"domain needs a single dimension, got {sorted(dims) or 'none'}")
        self.dim = dims.pop()
        self.witness = w
        for i, ob in enumerate(self.obstacles):
            if ob.contains(w):
                raise OutsideDomainError(f"witness {w!r} lies in obstacle {i}: {ob!r}")

    def __repr__(self):
        return f"Domain({list(self.obstacles)!r}, witness={self.witness!r})"

    @property
    def bounded_complement(self) -> bool:
        return not any(ob.contains(INF) for ob in self.obstacles)

    def contains(self, x: Point) -> bool:
        x = as_point(x)
        if x is not INF and x.shape[0] != self.dim:
            raise DimensionError(f"point of dimension {x.shape[0]} in a domain of dimension {self.dim}")
        return not any(ob.contains(x) for ob in self.obstacles)

    def require(self, x: Point) -> Point:
        x = as_point(x)
        if not self.contains(x):
            raise OutsideDomainError(f"point {x!r} is not in the domain")
        return x

    def transformed(self, m: ConformalMap) -> "Domain":
        """The image domain m(U) = complement of m(U^c)."""
        return Domain([transform_obstacle(m, ob) for ob in self.obstacles], m(self.witness), self.dim)

    def with_obstacles(self, extra: Sequence[Obstacle]) -> "Domain":
        return Domain(self.obstacles + tuple(extra), self.witness, self.dim)


def contains(d: Domain, x: Point) -> bool:
    return d.contains(x)


def inverted_complement(d: Domain, x: Point) -> InvertedComplement:
    x = d.require(x)
    if x is INF:
        raise ValueError("inverted_complement needs a finite point; conjugate first")
    return _inverted(d, x)


def _inverted(d: Domain, x: np.ndarray) -> InvertedComplement:
    pieces = [ob.inverted(x) for ob in d.obstacles]
    centers = np.array([c for c, _ in pieces], dtype=float).reshape(len(pieces), d.dim)
    radii = np.array([r for _, r in pieces], dtype=float)
    return InvertedComplement(x, centers, radii)


def sup_log_ratio(d: Domain, x1: Point, x2: Point) -> float:
    """sup over u in U^c of log(|x2 - u| / |x1 - u|), with |INF - u| := 1."""
    return _sup_log_ratio(d, d.require(x1), d.require(x2))


def _sup_log_ratio(d: Domain, x1: Point, x2: Point) -> float:
    if x1 is INF and x2 is INF:
        return 0.0
    if x1 is INF:
        far = max(ob.farthest(x2) for ob in d.obstacles)
        return math.log(far) if far < math.inf else math.inf
    w = _inverted(d, x1)
    if x2 is INF:
        return math.log(float(np.max(np.linalg.norm(w.centers, axis=1) + w.radii)))
    diff = x2 - x1
    delta = float(np.linalg.norm(diff))
    if delta == 0.0:
        return 0.0
    e = diff / delta
    # |x2-u|/|x1-u| = |e - delta*c| + delta*rho  for the piece (c, rho)
    ec = w.centers @ e
    cc = np.einsum("ij,ij->i", w.centers, w.centers)
    q = -2.0 * delta * ec + delta * delta * cc
    norm_minus_one = q / (np.sqrt(np.maximum(1.0 + q, 0.0)) + 1.0)
    excess = norm_minus_one + delta * w.radii
    best = float(np.max(excess))
    if best > -0.5:
        return float(np.log1p(best))
    # every ratio is small: 1 + q cancels, so take the norm directly
    direct = np.linalg.norm(e - delta * w.centers, axis=1) + delta * w.radii
    return float(np.log(np.max(direct)))


def support_interval(d: Domain, x: Point, h) -> tuple[float, float]:
    """inf and sup of <w, h> over W(x)."""
    h = as_point(h, d.dim)
    w = inverted_complement(d, x)
    proj = w.centers @ h
    spread = w.radii * float(np.linalg.norm(h))
    return float(np.min(proj - spread)), float(np.max(proj + spread))


def diameter_of_inverted_complement(d: Domain, x: Point) -> float:
    w = inverted_complement(d, x)
    gaps = np.linalg.norm(w.centers[:, None, :] - w.centers[None, :, :], axis=-1)
    return float(np.max(gaps + w.radii[:, None] + w.radii[None, :]))


def distance_to_complement(d: Domain, x: Point) -> float:
    """Euclidean distance from a finite x to the finite part of U^c."""
    x = d.require(x)
    if x is INF:
        raise ValueError("distance_to_complement needs a finite point")
    return min(ob.distance(x) for ob in d.obstacles)


def _ball_margin(center: np.ndarray, radius: float, ob: Obstacle) -> float:
    """Positive when the closed ball is disjoint from the obstacle."""
    if isinstance(ob, ClosedBall):
        return float(np.linalg.norm(center - ob.center)) - radius - ob.radius
    if isinstance(ob, ClosedBallExterior):
        return ob.radius - float(np.linalg.norm(center - ob.center)) - radius
    if isinstance(ob, ClosedHalfSpace):
        return ob.offset - float(ob.normal @ center) - radius
    if ob.point is INF:
        return math.inf
    return float(np.linalg.norm(ob.point - center)) - radius


def region_inside(d: Domain, r: Region) -> bool:
    """Whether a ball region lies in U.

    A closed ball must be strictly disjoint from every obstacle; an open ball
    may touch an obstacle's boundary.
    """
    if not r.is_ball:
        raise UnsupportedError(f"region_inside needs a ball region, got {r!r}")
    if r.dim != d.dim:
        raise DimensionError(f"region of dimension {r.dim} in a domain of dimension {d.dim}")
    s = r.surface
    margin = min(_ball_margin(s.center, s.radius, ob) for ob in d.obstacles)
    scale = max(1.0, s.radius, float(np.linalg.norm(s.center)))
    if r.closed:
        return margin > CONTAINMENT_TOL * scale
    return margin >= -CONTAINMENT_TOL * scale


def obstacle_covers(big: Obstacle, small: Obstacle, tol: float = 1e-12) -> bool:
    """A sufficient test for ``small`` being a subset of ``big``."""
    if isinstance(small, SinglePoint):
        if big.contains(small.point):
            return True
        return small.point is not INF and not isinstance(big, SinglePoint) and big.distance(small.point) <= tol
    if isinstance(big, SinglePoint):
        return False
    if isinstance(small, ClosedBall):
        if isinstance(big, ClosedHalfSpace):
            return float(big.normal @ small.center) - small.radius >= big.offset - tol
        gap = float(np.linalg.norm(small.center - big.center))
        if isinstance(big, ClosedBall):
            return gap + small.radius <= big.radius + tol
        return gap - small.radius >= big.radius - tol
    if isinstance(small, ClosedBallExterior):
        if isinstance(big, ClosedBallExterior):
            return float(np.linalg.norm(small.center - big.center)) + big.radius <= small.radius + tol
        return False
    # small is a half-space
    if isinstance(big, ClosedHalfSpace):
        return float(big.normal @ small.normal) >= 1 - tol and small.offset >= big.offset - tol
    if isinstance(big, ClosedBallExterior):
        # the hole must sit in the complementary open half-space
        return float(small.normal @ big.center) + big.radius <= small.offset + tol
    return False


def complement_covers(outer_complement: Sequence[Obstacle], inner_complement: Sequence[Obstacle]) -> bool:
    """Sufficient test that every outer obstacle lies in some inner obstacle,
    i.e. V^c is a subset of U^c, i.e. U is a subset of V."""
    return all(any(obstacle_covers(big, small) for big in inner_complement) for small in outer_complement)


def sample_points(d: Domain, n: int, rng: np.random.Generator, lo=None, hi=None) -> np.ndarray:
    """Rejection-sample ``n`` finite points of U uniformly from a box."""
    if lo is None or hi is None:
        lo, hi = default_box(d)
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    out: list[np.ndarray] = []
    tries = 0
    while len(out) < n:
        batch = rng.uniform(lo, hi, size=(max(64, 2 * (n - len(out))), d.dim))
        for p in batch:
            if d.contains(p):
                out.append(p)
                if len(out) == n:
                    break
        tries += 1
        if tries > 1000:
            raise RuntimeError("could not sample enough points of the domain inside the box")
    return np.array(out)


def default_box(d: Domain) -> tuple[np.ndarray, np.ndarray]:
    """A box around the witness and the obstacles' finite features."""
    holes = [ob for ob in d.obstacles if isinstance(ob, ClosedBallExterior)]
    if holes:
        ob = min(holes, key=lambda o: o.radius)
        return ob.center - ob.radius, ob.center + ob.radius
    anchors = [d.witness] if d.witness is not INF else []
    extent = 1.0
    for ob in d.obstacles:
        if isinstance(ob, ClosedBall):
            anchors.append(ob.center)
            extent = max(extent, ob.radius)
        elif isinstance(ob, ClosedHalfSpace):
            anchors.append(ob.normal * ob.offset)
        elif ob.point is not INF:
            anchors.append(ob.point)
    pts = np.array(anchors)
    return pts.min(axis=0) - 2 * extent, pts.max(axis=0) + 2 * extent
