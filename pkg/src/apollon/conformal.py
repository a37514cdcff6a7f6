"""The conformal group as lists of primitive maps.

A :class:`ConformalMap` stores primitives in composition order and applies
them rightmost-first, so ``ConformalMap([A, B])(x) == A(B(x))``.  Images of
points, generalized spheres and regions are computed in closed form.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError
from .extgeom import INF, Hyperplane, Point, Region, Sphere, as_point

# a point this close to the inversion center is sent to INF
EXCEPTIONAL_RADIUS = 1e-14
# relative threshold for "sphere passes through the inversion center"
_THROUGH_ORIGIN_RTOL = 1e-13


@dataclass(frozen=True, eq=False)
class Translation:
    vector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vector", as_point(self.vector))

    @property
    def dim(self):
        return self.vector.shape[0]

    def point(self, x):
        return INF if x is INF else x + self.vector

    def surface(self, s):
        if isinstance(s, Sphere):
            return Sphere(s.center + self.vector, s.radius)
        return Hyperplane(s.normal, s.offset + float(s.normal @ self.vector))

    def inverse(self):
        return Translation(-self.vector)


@dataclass(frozen=True, eq=False)
class Orthogonal:
    matrix: np.ndarray

    def __post_init__(self):
        q = np.array(self.matrix, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError("orthogonal matrix must be square")
        if not np.allclose(q.T @ q, np.eye(q.shape[0]), rtol=0, atol=1e-10):
            raise ValueError("matrix is not orthogonal to 1e-10")
        object.__setattr__(self, "matrix", q)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def point(self, x):
        return INF if x is INF else self.matrix @ x

    def surface(self, s):
        if isinstance(s, Sphere):
            return Sphere(self.matrix @ s.center, s.radius)
        n = self.matrix @ s.normal
        return Hyperplane(n / np.linalg.norm(n), s.offset)

    def inverse(self):
        return Orthogonal(self.matrix.T)


@dataclass(frozen=True, eq=False)
class Homothety:
    factor: float

    def __post_init__(self):
        object.__setattr__(self, "factor", float(self.factor))
        if not self.factor > 0:
            raise ValueError(f"homothety factor must be positive, got {self.factor}")

    dim = None

    def point(self, x):
        return INF if x is INF else self.factor * x

    def surface(self, s):
        if isinstance(s, Sphere):
            return Sphere(self.factor * s.center, self.factor * s.radius)
        return Hyperplane(s.normal, self.factor * s.offset)

    def inverse(self):
        return Homothety(1.0 / self.factor)


@dataclass(frozen=True, eq=False)
class Inversion:
    """x -> x / <x, x>, exchanging 0 and INF."""

    dim: int

    def point(self, x):
        if x is INF:
            return np.zeros(self.dim)
        r2 = float(x @ x)
        if r2 <= EXCEPTIONAL_RADIUS**2:
            return INF
        return x / r2

    def surface(self, s):
        if isinstance(s, Sphere):
            c, rho = s.center, s.radius
            cc = float(c @ c)
            k = cc - rho * rho
            if abs(k) <= _THROUGH_ORIGIN_RTOL * (cc + rho * rho):
                # |x|^2 = 2<c, x> becomes <c, y> = 1/2
                norm_c = float(np.sqrt(cc))
                return Hyperplane(c / norm_c, 0.5 / norm_c)
            return Sphere(c / k, rho / abs(k))
        if abs(s.offset) <= EXCEPTIONAL_RADIUS:
            return Hyperplane(s.normal, 0.0)
        o = s.offset
        return Sphere(s.normal / (2.0 * o), 1.0 / (2.0 * abs(o)))

    def inverse(self):
        return self


Primitive = Union[Translation, Orthogonal, Homothety, Inversion]


class ConformalMap:
    """Composition of primitives, applied right to left."""

    def __init__(self, primitives: Iterable[Primitive] = (), dim: int | None = None):
        self.primitives: tuple[Primitive, ...] = tuple(primitives)
        dims = {p.dim for p in self.primitives if p.dim is not None}
        if dim is not None:
            dims.add(dim)
        if len(dims) > 1:
            raise DimensionError(f"primitives of mixed dimensions {sorted(dims)}")
        self.dim = dims.pop() if dims else None

    @classmethod
    def identity(cls, dim: int | None = None) -> "ConformalMap":
        return cls((), dim)

    def _check(self, dim):
        if self.dim is not None and dim is not None and dim != self.dim:
            raise DimensionError(f"map of dimension {self.dim} applied to dimension {dim}")

    def __call__(self, x: Point) -> Point:
        x = as_point(x)
        if x is not INF:
            self._check(x.shape[0])
        for p in reversed(self.primitives):
            x = p.point(x)
        return x

    def __matmul__(self, other: "ConformalMap") -> "ConformalMap":
        return compose(self, other)

    def __len__(self):
        return len(self.primitives)

    def __repr__(self):
        return f"ConformalMap({list(self.primitives)!r})"


def apply(m: ConformalMap, x: Point) -> Point:
    return m(x)


def compose(a: ConformalMap, b: ConformalMap) -> ConformalMap:
    """The map x -> a(b(x))."""
    if a.dim is not None and b.dim is not None and a.dim != b.dim:
        raise DimensionError(f"cannot compose maps of dimensions {a.dim} and {b.dim}")
    return ConformalMap(a.primitives + b.primitives, a.dim or b.dim)


def inverse(m: ConformalMap) -> ConformalMap:
    return ConformalMap([p.inverse() for p in reversed(m.primitives)], m.dim)


def simplify(m: ConformalMap) -> ConformalMap:
    """Merge adjacent primitives of the same kind and drop identities."""
    out: list[Primitive] = []
    for p in m.primitives:
        prev = out[-1] if out else None
        if isinstance(p, Translation) and isinstance(prev, Translation):
            p = Translation(prev.vector + p.vector)
        elif isinstance(p, Homothety) and isinstance(prev, Homothety):
            p = Homothety(prev.factor * p.factor)
        elif isinstance(p, Orthogonal) and isinstance(prev, Orthogonal):
            p = Orthogonal(prev.matrix @ p.matrix)
        elif isinstance(p, Inversion) and isinstance(prev, Inversion):
            out.pop()
            continue
        else:
            prev = None
        if prev is not None:
            out.pop()
        if isinstance(p, Translation) and not np.any(p.vector):
            continue
        if isinstance(p, Homothety) and p.factor == 1.0:
            continue
        out.append(p)
    return ConformalMap(out, m.dim)


def image_sphere(m: ConformalMap, s):
    """Exact image of a sphere or hyperplane."""
    m._check(s.dim)
    for p in reversed(m.primitives):
        s = p.surface(s)
    return s


def image_region(m: ConformalMap, r: Region) -> Region:
    """Image of a region; the side is fixed by mapping an interior witness."""
    surface = image_sphere(m, r.surface)
    w = m(r.witness())
    if w is INF:
        if not isinstance(surface, Sphere):
            raise ArithmeticError("interior witness mapped onto the boundary at infinity")
        side = "outside"
    else:
        side = "inside" if surface.level(w) < 0 else "outside"
    return Region(surface, side, r.closed)


# -- builders ----------------------------------------------------------------


def translation(v: Sequence[float]) -> ConformalMap:
    return ConformalMap([Translation(v)])


def homothety(factor: float, dim: int | None = None) -> ConformalMap:
    return ConformalMap([Homothety(factor)], dim)


def orthogonal(q) -> ConformalMap:
    return ConformalMap([Orthogonal(q)])


def unit_inversion(dim: int) -> ConformalMap:
    return ConformalMap([Inversion(dim)])


def inversion_in(center, radius: float = 1.0) -> ConformalMap:
    """Inversion in the sphere of given center and radius."""
    c = as_point(center)
    return ConformalMap(
        [Translation(c), Homothety(radius * radius), Inversion(c.shape[0]), Translation(-c)]
    )


def similarity(factor: float, q=None, shift=None, dim: int | None = None) -> ConformalMap:
    """x -> factor * Q x + shift."""
    prims: list[Primitive] = []
    if shift is not None:
        prims.append(Translation(shift))
    prims.append(Homothety(factor))
    if q is not None:
        prims.append(Orthogonal(q))
    return ConformalMap(prims, dim)


def random_map(dim: int, rng: np.random.Generator, scale: float = 1.0, invert: bool = True,
               inversion_center=None) -> ConformalMap:
    """A random element of the conformal group: a similarity, optionally
    preceded by an inversion.

    Without an explicit ``inversion_center`` the center is drawn at distance
    ``3 * scale`` from the origin.
    """
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q = q * np.sign(np.diag(r))
    prims: list[Primitive] = [
        Translation(rng.uniform(-1, 1, dim) * scale),
        Homothety(float(np.exp(rng.uniform(-0.7, 0.7)))),
        Orthogonal(q),
    ]
    if invert:
        if inversion_center is None:
            u = rng.standard_normal(dim)
            inversion_center = 3.0 * scale * u / np.linalg.norm(u)
        radius = scale * float(np.exp(rng.uniform(-0.5, 0.5)))
        prims += inversion_in(inversion_center, radius).primitives
    return ConformalMap(prims, dim)
