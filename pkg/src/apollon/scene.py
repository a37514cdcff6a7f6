"""JSON scene files: schema, validation and construction of library objects.

Validation problems are raised as :class:`SceneError` carrying a dotted path
into the document, e.g. ``domains.U.obstacles.0.radius``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .conformal import ConformalMap, Homothety, Inversion, Orthogonal, Translation, inversion_in
from .contraction import NestedPair, nested_pair
from .domain import ClosedBall, ClosedBallExterior, ClosedHalfSpace, Domain, SinglePoint
from .errors import ApollonError
from .extgeom import as_point
from .fractal import IfsSystem

PointSpec = Union[list[float], Literal["inf"]]


class SceneError(ApollonError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


# -- obstacles and primitives -------------------------------------------------


class BallSpec(_Model):
    type: Literal["ball"]
    center: list[float]
    radius: float = Field(gt=0)


class BallExteriorSpec(_Model):
    type: Literal["ball_exterior"]
    center: list[float]
    radius: float = Field(gt=0)


class HalfSpaceSpec(_Model):
    """The closed set <normal, x> >= offset (with INF)."""

    type: Literal["half_space"]
    normal: list[float]
    offset: float


class PointObstacleSpec(_Model):
    type: Literal["point"]
    point: PointSpec


ObstacleSpec = Annotated[
    Union[BallSpec, BallExteriorSpec, HalfSpaceSpec, PointObstacleSpec], Field(discriminator="type")
]


class TranslationSpec(_Model):
    type: Literal["translation"]
    vector: list[float]


class OrthogonalSpec(_Model):
    type: Literal["orthogonal"]
    matrix: list[list[float]]


class HomothetySpec(_Model):
    type: Literal["homothety"]
    factor: float = Field(gt=0)


class InversionSpec(_Model):
    """Unit inversion at the origin unless a center/radius is given."""

    type: Literal["inversion"]
    center: Optional[list[float]] = None
    radius: float = Field(default=1.0, gt=0)


PrimitiveSpec = Annotated[
    Union[TranslationSpec, OrthogonalSpec, HomothetySpec, InversionSpec], Field(discriminator="type")
]


class DomainSpec(_Model):
    obstacles: list[ObstacleSpec] = Field(min_length=1)
    witness: PointSpec


class NestingSpec(_Model):
    inner: str
    outer: str


class IfsSpec(_Model):
    nesting: str
    generators: list[str] = Field(min_length=1)


# -- commands -------------------------------------------------------------------


class DistCommand(_Model):
    domain: str
    pairs: list[tuple[PointSpec, PointSpec]] = Field(min_length=1)


class DensityCommand(_Model):
    domain: str
    lo: list[float]
    hi: list[float]
    n: int = Field(default=21, ge=2)


class FinslerCommand(_Model):
    domain: str
    points: list[list[float]] = Field(min_length=1)
    directions: list[list[float]] = Field(min_length=1)


class ContractCheckCommand(_Model):
    nesting: str
    samples: Optional[int] = Field(default=None, ge=1)
    maps: list[str] = Field(default_factory=list)
    paths: int = Field(default=5, ge=0)
    lo: Optional[list[float]] = None
    hi: Optional[list[float]] = None


class BirkhoffCommand(_Model):
    interval: tuple[float, float]
    grid: int = Field(default=401, ge=3)


class IfsCommand(_Model):
    system: str
    depth: Optional[int] = Field(default=None, ge=1)
    scales: Optional[list[float]] = None


class ApollonianBallSpec(_Model):
    a: list[float]
    b: list[float]
    alpha: float = Field(gt=0)


class RenderCommand(_Model):
    viewport: tuple[float, float, float, float]
    width: int = Field(default=600, ge=16)
    domains: list[str] = Field(default_factory=list)
    points: list[list[float]] = Field(default_factory=list)
    samples_from: Optional[str] = None
    apollonian_balls: list[ApollonianBallSpec] = Field(default_factory=list)
    ifs: Optional[str] = None
    depth: Optional[int] = Field(default=None, ge=1)


class Commands(_Model):
    dist: Optional[DistCommand] = None
    density: Optional[DensityCommand] = None
    finsler: Optional[FinslerCommand] = None
    contract_check: Optional[ContractCheckCommand] = Field(default=None, alias="contract-check")
    birkhoff: Optional[BirkhoffCommand] = None
    ifs: Optional[IfsCommand] = None
    render: Optional[RenderCommand] = None

    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class SceneSpec(_Model):
    dimension: int = Field(ge=1)
    domains: dict[str, DomainSpec] = Field(default_factory=dict)
    maps: dict[str, list[PrimitiveSpec]] = Field(default_factory=dict)
    nestings: dict[str, NestingSpec] = Field(default_factory=dict)
    ifs: dict[str, IfsSpec] = Field(default_factory=dict)
    commands: Commands = Field(default_factory=Commands)
    seed: int = Field(default=0, ge=0, lt=2**64)


# -- construction ----------------------------------------------------------------


@dataclass
class Scene:
    spec: SceneSpec
    digest: str
    name: str
    domains: dict[str, Domain] = field(default_factory=dict)
    maps: dict[str, ConformalMap] = field(default_factory=dict)
    _nestings: dict[str, NestedPair] = field(default_factory=dict)
    _systems: dict[str, IfsSystem] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.spec.dimension

    def domain(self, name: str, path: str) -> Domain:
        if name not in self.domains:
            raise SceneError(path, f"unknown domain {name!r}")
        return self.domains[name]

    def map(self, name: str, path: str) -> ConformalMap:
        if name not in self.maps:
            raise SceneError(path, f"unknown map {name!r}")
        return self.maps[name]

    def nesting(self, name: str, path: str) -> NestedPair:
        if name not in self.spec.nestings:
            raise SceneError(path, f"unknown nesting {name!r}")
        if name not in self._nestings:
            ns = self.spec.nestings[name]
            inner = self.domain(ns.inner, f"nestings.{name}.inner")
            outer = self.domain(ns.outer, f"nestings.{name}.outer")
            try:
                self._nestings[name] = nested_pair(inner, outer, rng=np.random.default_rng(self.spec.seed))
            except ApollonError as exc:
                raise SceneError(f"nestings.{name}", str(exc)) from exc
        return self._nestings[name]

    def system(self, name: str, path: str) -> IfsSystem:
        if name not in self.spec.ifs:
            raise SceneError(path, f"unknown IFS {name!r}")
        if name not in self._systems:
            s = self.spec.ifs[name]
            nest = self.nesting(s.nesting, f"ifs.{name}.nesting")
            gens = [self.map(g, f"ifs.{name}.generators.{i}") for i, g in enumerate(s.generators)]
            try:
                self._systems[name] = IfsSystem(nest, gens)
            except ApollonError as exc:
                raise SceneError(f"ifs.{name}", str(exc)) from exc
        return self._systems[name]


def _point(p, dim: int, path: str):
    try:
        return as_point(p, dim)
    except (ValueError, TypeError) as exc:
        raise SceneError(path, str(exc)) from exc


def _vector(v, dim: int, path: str) -> np.ndarray:
    if v == "inf":
        raise SceneError(path, "expected a finite vector")
    return _point(v, dim, path)


def _obstacle(spec, dim: int, path: str):
    try:
        if isinstance(spec, BallSpec):
            return ClosedBall(_vector(spec.center, dim, path + ".center"), spec.radius)
        if isinstance(spec, BallExteriorSpec):
            return ClosedBallExterior(_vector(spec.center, dim, path + ".center"), spec.radius)
        if isinstance(spec, HalfSpaceSpec):
            return ClosedHalfSpace(_vector(spec.normal, dim, path + ".normal"), spec.offset)
        return SinglePoint(_point(spec.point, dim, path + ".point"))
    except SceneError:
        raise
    except ApollonError as exc:
        raise SceneError(path, str(exc)) from exc
    except ValueError as exc:
        raise SceneError(path, str(exc)) from exc


def _primitives(specs, dim: int, path: str) -> ConformalMap:
    prims = []
    for i, p in enumerate(specs):
        here = f"{path}.{i}"
        try:
            if isinstance(p, TranslationSpec):
                prims.append(Translation(_vector(p.vector, dim, here + ".vector")))
            elif isinstance(p, OrthogonalSpec):
                q = np.array(p.matrix, dtype=float)
                if q.shape != (dim, dim):
                    raise SceneError(here + ".matrix", f"expected a {dim}x{dim} matrix")
                prims.append(Orthogonal(q))
            elif isinstance(p, HomothetySpec):
                prims.append(Homothety(p.factor))
            elif p.center is None and p.radius == 1.0:
                prims.append(Inversion(dim))
            else:
                c = np.zeros(dim) if p.center is None else _vector(p.center, dim, here + ".center")
                prims.extend(inversion_in(c, p.radius).primitives)
        except SceneError:
            raise
        except ValueError as exc:
            raise SceneError(here, str(exc)) from exc
    return ConformalMap(prims, dim)


def _format_validation(exc: ValidationError) -> SceneError:
    err = exc.errors()[0]
    path = ".".join(str(p) for p in err["loc"])
    return SceneError(path, err["msg"])


def parse_scene(data: bytes | str, name: str = "<scene>") -> Scene:
    raw = data.encode() if isinstance(data, str) else data
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SceneError("", f"invalid JSON: {exc}") from exc
    try:
        spec = SceneSpec.model_validate(doc)
    except ValidationError as exc:
        raise _format_validation(exc) from exc
    scene = Scene(spec=spec, digest=hashlib.sha256(raw).hexdigest(), name=name)
    dim = spec.dimension
    for key, ds in spec.domains.items():
        path = f"domains.{key}"
        obstacles = [_obstacle(o, dim, f"{path}.obstacles.{i}") for i, o in enumerate(ds.obstacles)]
        witness = _point(ds.witness, dim, path + ".witness")
        try:
            scene.domains[key] = Domain(obstacles, witness, dim)
        except ApollonError as exc:
            raise SceneError(path + ".witness", str(exc)) from exc
    for key, ms in spec.maps.items():
        scene.maps[key] = _primitives(ms, dim, f"maps.{key}")
    for key in spec.nestings:
        scene.nesting(key, f"nestings.{key}")
    for key in spec.ifs:
        scene.system(key, f"ifs.{key}")
    return scene


def load_scene(path: str | Path) -> Scene:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise SceneError("", f"cannot read scene file: {exc}") from exc
    return parse_scene(raw, p.name)
