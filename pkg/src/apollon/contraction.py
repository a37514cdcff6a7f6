"""Birkhoff's coefficient tanh(Delta/4), relative diameters of nestings and
the uniform-contraction checks built on them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from .apollonian import apollonian_distance
from .conformal import ConformalMap, image_region
from .domain import (
    ClosedBall,
    ClosedBallExterior,
    ClosedHalfSpace,
    Domain,
    complement_covers,
    region_inside,
    sample_points,
)
from .errors import NestingError, OutsideDomainError, UnsupportedError
from .extgeom import Hyperplane, Point, Region, Sphere, as_point

CLOSED_FORM = "closed-form"
SAMPLED = "sampled-lower-bound"
Provenance = Literal["closed-form", "sampled-lower-bound"]

UCP_TOL = 1e-9


def birkhoff_coefficient(delta: float) -> float:
    """tanh(delta / 4), written with expm1 so it stays accurate near 0 and at inf."""
    if delta < 0 or math.isnan(delta):
        raise ValueError(f"diameter must be non-negative, got {delta}")
    e = math.expm1(-delta / 2.0)
    return -e / (2.0 + e)


def diameter_from_coefficient(theta: float) -> float:
    """Inverse of birkhoff_coefficient: 4 artanh(theta)."""
    if theta >= 1.0:
        return math.inf
    return 2.0 * (math.log1p(theta) - math.log1p(-theta))


# -- one-dimensional Hilbert metric ------------------------------------------


def j_metric(s1: float, s2: float) -> float:
    """|log(s2 / s1)| on J = (0, inf)."""
    if not (s1 > 0 and s2 > 0):
        raise ValueError("j_metric needs positive arguments")
    return abs(math.log(s2 / s1))


def hilbert_1d(interval: tuple[float, float], s1: float, s2: float) -> float:
    """|log [s1, s2; a1, a2]| for K = (a1, a2), a2 may be inf."""
    a1, a2 = interval
    if not 0 <= a1 < a2:
        raise ValueError(f"bad interval {interval}")
    for s in (s1, s2):
        if not a1 < s < a2:
            raise ValueError(f"{s} is not in the open interval ({a1}, {a2})")
    if a2 == math.inf:
        return abs(math.log((s2 - a1) / (s1 - a1)))
    return abs(math.log((s2 - a1) * (a2 - s1) / ((s1 - a1) * (a2 - s2))))


@dataclass
class BirkhoffGrid:
    interval: tuple[float, float]
    grid: int
    bound: float
    max_ratio: float
    argmax_pair: tuple[float, float]
    infinitesimal_max: float
    infinitesimal_argmax: float

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.bound + UCP_TOL


def birkhoff_grid_check(interval: tuple[float, float], m: int = 401) -> BirkhoffGrid:
    """Max of d_J / d_K over an m x m grid in K, plus the diagonal profile.

    The diagonal ratio at s uses a symmetric finite difference of width
    1e-6 s and peaks at the geometric mean of the endpoints.
    """
    a1, a2 = map(float, interval)
    if not (0 < a1 < a2 < math.inf):
        raise ValueError(f"need 0 < a1 < a2 < inf, got {interval}")
    if m < 3:
        raise ValueError("grid needs at least 3 points")
    bound = birkhoff_coefficient(math.log(a2 / a1))
    s = a1 + (a2 - a1) * np.arange(1, m + 1) / (m + 1)
    s1, s2 = np.meshgrid(s, s, indexing="ij")
    dj = np.abs(np.log1p((s2 - s1) / s1))
    dk = np.abs(np.log((s2 - a1) * (a2 - s1)) - np.log((s1 - a1) * (a2 - s2)))
    off = dk > 0
    ratio = np.zeros_like(dj)
    ratio[off] = dj[off] / dk[off]
    i, j = np.unravel_index(np.argmax(ratio), ratio.shape)

    eps = 1e-6 * s
    lo, hi = s - eps, s + eps
    inf_dj = np.log1p(2 * eps / lo)
    inf_dk = np.log((hi - a1) * (a2 - lo)) - np.log((lo - a1) * (a2 - hi))
    inf_ratio = inf_dj / inf_dk
    k = int(np.argmax(inf_ratio))
    return BirkhoffGrid(
        (a1, a2), m, bound, float(ratio[i, j]), (float(s[i]), float(s[j])),
        float(inf_ratio[k]), float(s[k]),
    )


# -- nestings ----------------------------------------------------------------


def ball_boundary(d: Domain):
    """The boundary sphere/hyperplane when U is a generalized open ball, else None."""
    if len(d.obstacles) != 1:
        return None
    ob = d.obstacles[0]
    if isinstance(ob, (ClosedBall, ClosedBallExterior)):
        return Sphere(ob.center, ob.radius)
    if isinstance(ob, ClosedHalfSpace):
        return Hyperplane(ob.normal, ob.offset)
    return None


def ball_region(d: Domain) -> Region:
    """U as an open Region, for U a generalized ball."""
    ob = d.obstacles[0] if len(d.obstacles) == 1 else None
    if isinstance(ob, ClosedBallExterior):
        return Region(Sphere(ob.center, ob.radius), "inside")
    if isinstance(ob, ClosedBall):
        return Region(Sphere(ob.center, ob.radius), "outside")
    if isinstance(ob, ClosedHalfSpace):
        return Region(Hyperplane(ob.normal, ob.offset), "inside")
    raise UnsupportedError(f"domain is not a generalized ball: {d!r}")


def inversive_distance(s1, s2) -> float:
    """The conformal invariant of two generalized spheres (1 when tangent)."""
    if isinstance(s1, Hyperplane) and isinstance(s2, Hyperplane):
        # nested half-spaces have parallel boundaries meeting at INF
        return 1.0 if abs(float(s1.normal @ s2.normal)) >= 1 - 1e-12 else abs(float(s1.normal @ s2.normal))
    if isinstance(s1, Hyperplane):
        s1, s2 = s2, s1
    if isinstance(s2, Hyperplane):
        return abs(s2.level(s1.center)) / s1.radius
    gap = s1.center - s2.center
    return abs(float(gap @ gap) - s1.radius**2 - s2.radius**2) / (2.0 * s1.radius * s2.radius)


@dataclass
class NestedPair:
    inner: Domain
    outer: Domain
    delta: float
    provenance: Provenance
    coefficient: float = field(default=None)

    def __post_init__(self):
        if self.coefficient is None:
            self.coefficient = birkhoff_coefficient(self.delta)

    @property
    def certified(self) -> bool:
        return self.provenance == CLOSED_FORM

    def transformed(self, m: ConformalMap) -> "NestedPair":
        return nested_pair(self.inner.transformed(m), self.outer.transformed(m))


def check_nesting(inner: Domain, outer: Domain) -> None:
    if inner.dim != outer.dim:
        raise NestingError("domains of different dimensions")
    if not complement_covers(outer.obstacles, inner.obstacles):
        raise NestingError("could not verify that the inner domain lies in the outer one")


def diameter(inner: Domain, outer: Domain, samples: Sequence[Point] | None = None,
             rng: np.random.Generator | None = None, n_samples: int = 200) -> tuple[float, Provenance, float]:
    """diam_outer(inner) as (delta, provenance, tanh(delta/4)).

    Generalized-ball nestings are conformally concentric balls B(0, rho) in
    B(0, R); then tanh(delta/4) = rho/R, read off the inversive distance of
    the boundaries.  Anything else yields a sampled lower bound.
    """
    check_nesting(inner, outer)
    s_in, s_out = ball_boundary(inner), ball_boundary(outer)
    if s_in is not None and s_out is not None:
        delta_inv = inversive_distance(s_in, s_out)
        if delta_inv <= 1.0 + 1e-15:
            return math.inf, CLOSED_FORM, 1.0
        theta = 1.0 / (delta_inv + math.sqrt((delta_inv - 1.0) * (delta_inv + 1.0)))
        return diameter_from_coefficient(theta), CLOSED_FORM, theta
    if samples is None:
        rng = rng if rng is not None else np.random.default_rng(0)
        samples = list(sample_points(inner, n_samples, rng))
    pts = [inner.require(p) for p in samples]
    best = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = max(best, apollonian_distance(outer, pts[i], pts[j]))
    return best, SAMPLED, birkhoff_coefficient(best)


def nested_pair(inner: Domain, outer: Domain, **kwargs) -> NestedPair:
    delta, prov, theta = diameter(inner, outer, **kwargs)
    return NestedPair(inner, outer, delta, prov, theta)


def concentric_balls(rho: float, R: float, dim: int = 2, center=None) -> NestedPair:
    """B(c, rho) inside B(c, R)."""
    if not 0 < rho <= R:
        raise ValueError(f"need 0 < rho <= R, got {rho}, {R}")
    c = np.zeros(dim) if center is None else as_point(center, dim)
    inner = Domain([ClosedBallExterior(c, rho)], c)
    outer = Domain([ClosedBallExterior(c, R)], c)
    return nested_pair(inner, outer)


# -- contraction reports ------------------------------------------------------


@dataclass
class ContractionReport:
    samples: int
    skipped: int
    max_ratio: float
    bound: float
    argmax: int | None
    tol: float = UCP_TOL

    @property
    def margin(self) -> float:
        return self.bound - self.max_ratio

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.bound + self.tol

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}: bound {self.bound:.12g}, max ratio {self.max_ratio:.12g}, "
            f"margin {self.margin:.3g}, pairs {self.samples}, skipped {self.skipped}"
        )


def _ratio_report(pairs: Iterable[tuple[Point, Point]], num, den, bound: float, tol: float) -> ContractionReport:
    count = skipped = 0
    best, arg = 0.0, None
    for idx, (a, b) in enumerate(pairs):
        count += 1
        lower = den(a, b)
        if lower == 0.0 or math.isinf(lower):
            skipped += 1
            continue
        r = num(a, b) / lower
        if r > best or arg is None:
            best, arg = r, idx
    return ContractionReport(count, skipped, best, bound, arg, tol)


def verify_ucp(np_: NestedPair, pairs: Iterable[tuple[Point, Point]], tol: float = UCP_TOL) -> ContractionReport:
    """Check d_V <= tanh(Delta/4) d_U over sample pairs of U."""
    if not np_.certified:
        raise UnsupportedError("a sampled diameter is only a lower bound and cannot certify the contraction")
    checked = []
    for a, b in pairs:
        a, b = as_point(a), as_point(b)
        if not (np_.inner.contains(a) and np_.inner.contains(b)):
            raise OutsideDomainError(f"pair ({a!r}, {b!r}) is not in the inner domain")
        checked.append((a, b))
    return _ratio_report(
        checked,
        lambda a, b: apollonian_distance(np_.outer, a, b),
        lambda a, b: apollonian_distance(np_.inner, a, b),
        np_.coefficient, tol,
    )


def in_gamma(m: ConformalMap, np_: NestedPair) -> bool:
    """Whether m maps the outer domain V into the inner domain U."""
    image = image_region(m, ball_region(np_.outer))
    if not image.is_ball:
        raise UnsupportedError(f"image of V is not a bounded ball: {image!r}")
    return region_inside(np_.inner, image)


def lipschitz_report(m: ConformalMap, np_: NestedPair, pairs: Iterable[tuple[Point, Point]],
                     tol: float = UCP_TOL) -> ContractionReport:
    """Check d_V(m v1, m v2) <= tanh(Delta/4) d_V(v1, v2) over pairs of V."""
    if not np_.certified:
        raise UnsupportedError("a sampled diameter cannot certify a Lipschitz bound")
    V = np_.outer
    checked = []
    for a, b in pairs:
        a, b = V.require(a), V.require(b)
        checked.append((a, b))
    return _ratio_report(
        checked,
        lambda a, b: apollonian_distance(V, m(a), m(b)),
        lambda a, b: apollonian_distance(V, a, b),
        np_.coefficient, tol,
    )
