import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from apollon.apollonian import (
    PathPolyline,
    apollonian_distance,
    conformal_density,
    finsler_norm,
    hyperbolic_ball_distance,
    inner_path_length,
    riemann_path_length,
)
from apollon.conformal import random_map
from apollon.domain import ClosedBall, ClosedBallExterior, Domain, SinglePoint, distance_to_complement
from apollon.errors import OutsideDomainError
from apollon.extgeom import INF

KINDS = ["ball", "ball_exterior", "half_space", "point", "mixed"]


def unit_disk():
    return Domain([ClosedBallExterior([0.0, 0.0], 1.0)], [0.0, 0.0])


def test_disk_examples():
    d = unit_disk()
    assert apollonian_distance(d, [0, 0], [0.5, 0]) == pytest.approx(math.log(3), rel=1e-14)
    assert apollonian_distance(d, [0.3, 0.1], [0.3, 0.1]) == 0.0
    assert finsler_norm(d, [0, 0], [1, 0]) == pytest.approx(2.0, rel=1e-14)
    assert finsler_norm(d, [0.2, 0.2], [0, 0]) == 0.0
    assert conformal_density(d, [0, 0]) == pytest.approx(2.0, rel=1e-14)
    assert conformal_density(d, [0.5, 0]) == pytest.approx(8 / 3, rel=1e-14)


def test_two_point_complement():
    d = Domain([SinglePoint([0.0, 0.0]), SinglePoint(INF)], [1.0, 0.0])
    assert apollonian_distance(d, [1, 0], [2, 0]) == pytest.approx(math.log(2), rel=1e-14)
    # the distance only sees |x|: points on a common circle are not separated
    assert apollonian_distance(d, [1, 0], [0, 1]) == pytest.approx(0.0, abs=1e-15)


def test_matches_brute_force_pairs():
    rng = np.random.default_rng(5)
    for kind in KINDS:
        d = oracles.random_domain(kind, 2, rng)
        samples = oracles.complement_samples(d, 400, seed=1)
        x1, x2 = oracles.random_points_in(d.obstacles, 2, 2, rng)
        closed = apollonian_distance(d, x1, x2)
        brute = oracles.apollonian_distance_pairs(samples, x1, x2)
        assert brute <= closed + 1e-9
        assert closed - brute <= 0.05


def test_path_lengths():
    d = unit_disk()
    seg = PathPolyline.of([-0.5, 0], [0.5, 0])
    assert inner_path_length(d, seg) == pytest.approx(2 * math.log(3), rel=1e-9)
    assert riemann_path_length(d, PathPolyline.of([0, 0], [0.5, 0])) == pytest.approx(math.log(3), rel=1e-9)
    assert inner_path_length(d, PathPolyline.of([0.1, 0.1], [0.1, 0.1])) == 0.0
    single = Domain([SinglePoint([0.0, 0.0])], [1.0, 0.0])
    assert inner_path_length(single, PathPolyline.of([1, 0], [2, 3], [-1, 1])) == 0.0


def test_path_errors():
    d = unit_disk()
    with pytest.raises(OutsideDomainError):
        inner_path_length(d, PathPolyline.of([0, 0], [2, 0]))
    with pytest.raises(OutsideDomainError):
        # both vertices inside, the chord crosses the obstacle
        inner_path_length(Domain([ClosedBall([0.0, 0.0], 0.5)], [1.0, 0.0]), PathPolyline.of([-1, 0], [1, 0]))
    with pytest.raises(ValueError):
        PathPolyline.of([0, 0])
    with pytest.raises(ValueError):
        inner_path_length(d, PathPolyline.of([0, 0], [0.1, 0]), order=1)


def test_refinement_does_not_grow_length():
    d = unit_disk()
    path = PathPolyline.of([-0.6, 0.1], [0.2, 0.5], [0.7, -0.2])
    base = inner_path_length(d, path)
    assert inner_path_length(d, path.refined(4)) <= base + 1e-9


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(KINDS), st.integers(0, 2**32 - 1))
def test_metric_axioms(kind, seed):
    rng = np.random.default_rng(seed)
    d = oracles.random_domain(kind, 2, rng)
    x, y, z = oracles.random_points_in(d.obstacles, 2, 3, rng)
    dxy = apollonian_distance(d, x, y)
    assert dxy == pytest.approx(apollonian_distance(d, y, x), rel=1e-10, abs=1e-12)
    assert apollonian_distance(d, x, z) <= dxy + apollonian_distance(d, y, z) + 1e-10


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(KINDS), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_conformal_invariance(kind, dim, seed):
    rng = np.random.default_rng(seed)
    d = oracles.random_domain(kind, dim, rng)
    x, y = oracles.random_points_in(d.obstacles, dim, 2, rng)
    m = random_map(dim, rng)
    before = apollonian_distance(d, x, y)
    after = apollonian_distance(d.transformed(m), m(x), m(y))
    assert after == pytest.approx(before, rel=1e-9, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(KINDS), st.integers(0, 2**32 - 1))
def test_nesting_monotonicity(kind, seed):
    rng = np.random.default_rng(seed)
    V = oracles.random_domain(kind, 2, rng)
    extra = ClosedBall(rng.uniform(-2, 2, 2), rng.uniform(0.1, 0.5))
    pts = oracles.random_points_in(V.obstacles + (extra,), 2, 2, rng)
    if pts is None:
        return
    U = Domain(V.obstacles + (extra,), pts[0])
    assert apollonian_distance(V, *pts) <= apollonian_distance(U, *pts) + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(KINDS), st.integers(0, 2**32 - 1))
def test_finsler_bounds_and_finite_differences(kind, seed):
    rng = np.random.default_rng(seed)
    d = oracles.random_domain(kind, 2, rng, min_clearance=0.3)
    x = d.witness
    h = rng.standard_normal(2)
    h /= np.linalg.norm(h)
    p = finsler_norm(d, x, h)
    assert p <= conformal_density(d, x) * np.linalg.norm(h) + 1e-12
    errs = []
    for t in (1e-3, 1e-4):
        errs.append(abs(apollonian_distance(d, x + t * h, x) / t - p))
    # first-order consistency: the error shrinks roughly linearly in t
    scale = 1.0 / distance_to_complement(d, x) ** 2
    assert errs[0] <= 10 * scale * 1e-3 + 1e-9
    assert errs[1] <= 10 * scale * 1e-4 + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(KINDS), st.integers(0, 2**32 - 1))
def test_inner_length_below_riemann_length(kind, seed):
    rng = np.random.default_rng(seed)
    d = oracles.random_domain(kind, 2, rng, min_clearance=0.3)
    x = d.witness
    path = PathPolyline.of(x, x + 0.05 * rng.standard_normal(2), x + 0.05 * rng.standard_normal(2))
    try:
        inner = inner_path_length(d, path, order=8)
        riem = riemann_path_length(d, path, order=8)
    except OutsideDomainError:
        return
    assert inner <= riem + 1e-12


def test_hyperbolic_formula_scaling():
    a = hyperbolic_ball_distance([0.1, 0.2], [0.4, -0.3])
    b = hyperbolic_ball_distance([1.2, 2.4], [1.8, 1.4], center=[1.0, 2.0], radius=2.0)
    assert b == pytest.approx(hyperbolic_ball_distance([0.1, 0.2], [0.4, -0.3]), rel=1e-14)
    with pytest.raises(OutsideDomainError):
        hyperbolic_ball_distance([0.0, 0.0], [1.0, 0.0])
    assert a == pytest.approx(2 * math.asinh(math.hypot(0.3, 0.5) / math.sqrt((1 - 0.05) * (1 - 0.25))))
