"""Acceptance criteria AC1-AC9.

Each criterion is a function returning (passed, detail).  Under pytest every
criterion is one test and its PASS/FAIL line is echoed in the terminal
summary; run as a script it prints the same lines and exits non-zero on any
failure:

    python tests/test_acceptance.py
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))
import oracles  # noqa: E402

from apollon.apollonian import (  # noqa: E402
    PathPolyline,
    apollonian_distance,
    conformal_density,
    finsler_norm,
    hyperbolic_ball_distance,
    inner_path_length,
)
from apollon.conformal import ConformalMap, Homothety, Translation, random_map  # noqa: E402
from apollon.contraction import birkhoff_grid_check, concentric_balls, verify_ucp  # noqa: E402
from apollon.domain import (  # noqa: E402
    ClosedBall,
    ClosedBallExterior,
    Domain,
    SinglePoint,
    diameter_of_inverted_complement,
    distance_to_complement,
    sup_log_ratio,
    support_interval,
)
from apollon.extgeom import INF, cross_ratio  # noqa: E402
from apollon.fractal import IfsSystem, box_count, dimension_bound, limit_cover  # noqa: E402

RESULTS: dict[str, str] = {}

TITLES = {
    "AC1": "Birkhoff calibration",
    "AC2": "hyperbolic-ball identity",
    "AC3": "uniform contraction on the calibrated family",
    "AC4": "Finsler tightness at the center",
    "AC5": "Euclidean comparison bounds",
    "AC6": "oracle equivalence of domain queries",
    "AC7": "limit-set cover and dimension bound",
    "AC8": "conformal invariance",
    "AC9": "pseudo-metric degeneracy",
}


def _uniform_ball(rng, n, dim, radius):
    g = rng.standard_normal((n, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * radius * rng.uniform(0, 1, (n, 1)) ** (1 / dim)


def ac1():
    g = birkhoff_grid_check((1.0, 4.0), 401)
    ok_max = g.max_ratio <= 1 / 3 + 1e-6
    ok_arg = abs(g.infinitesimal_argmax - 2.0) <= 0.01 * 2.0
    detail = (f"grid max {g.max_ratio:.10f} <= 1/3 + 1e-6: {ok_max}; "
              f"infinitesimal argmax s = {g.infinitesimal_argmax:.5f} (target 2, 1%): {ok_arg}")
    return ok_max and ok_arg, detail


def ac2():
    rng = np.random.default_rng(20)
    disk = Domain([ClosedBallExterior([0.0, 0.0], 1.0)], [0.0, 0.0])
    pts = _uniform_ball(rng, 2000, 2, 1.0)
    worst = 0.0
    for x, y in zip(pts[:1000], pts[1000:]):
        exact = hyperbolic_ball_distance(x, y)
        worst = max(worst, abs(apollonian_distance(disk, x, y) - exact) / exact)
    spot = apollonian_distance(disk, [0.0, 0.0], [0.5, 0.0])
    ok_spot = abs(spot - math.log(3)) <= 1e-9 * math.log(3)
    return worst <= 1e-9 and ok_spot, f"max rel err {worst:.2e} over 1000 pairs; d(0, (1/2, 0)) = {spot!r}"


def _inversion_center(kind, rho, rng):
    u = rng.standard_normal(2)
    u /= np.linalg.norm(u)
    if kind == "outside":
        return rng.uniform(1.5, 3.0) * u
    if kind == "annulus":
        return 0.5 * (rho + 1.0) * u
    return rng.uniform(0.1, 0.6) * rho * u


def ac3():
    rng = np.random.default_rng(30)
    kinds = ["none", "outside", "annulus", "inside"]
    fails, worst_margin, tight = [], math.inf, {}
    for rho in (0.1, 0.5, 0.9):
        base = concentric_balls(rho, 1.0)
        pts = _uniform_ball(rng, 2000, 2, rho * (1 - 1e-6))
        near = _uniform_ball(rng, 400, 2, 0.05 * rho)
        maps = [ConformalMap.identity(2)]
        for i in range(20):
            kind = kinds[i % 4]
            if kind == "none":
                maps.append(random_map(2, rng, invert=False))
            else:
                maps.append(random_map(2, rng, inversion_center=_inversion_center(kind, rho, rng)))
        tight[rho] = math.inf
        for j, m in enumerate(maps):
            nest = base.transformed(m)
            if abs(nest.coefficient - rho) > 1e-9 * rho:
                fails.append(f"rho {rho} map {j}: coefficient {nest.coefficient!r}")
            mp = [m(p) for p in pts]
            rep = verify_ucp(nest, zip(mp[:1000], mp[1000:]))
            worst_margin = min(worst_margin, rep.margin)
            if not rep.passed or rep.samples != 1000:
                fails.append(f"rho {rho} map {j}: {rep.summary()}")
            mn = [m(p) for p in near]
            close = verify_ucp(nest, zip(mn[:200], mn[200:]))
            tight[rho] = min(tight[rho], close.max_ratio)
            if close.max_ratio <= rho - 0.05:
                fails.append(f"rho {rho} map {j}: near-center max ratio {close.max_ratio:.4f}")
    detail = (f"63 nestings x 1000 pairs, min margin {worst_margin:.3e}; near-center max ratio (worst map) "
              + ", ".join(f"{r}: {v:.4f}" for r, v in tight.items()))
    if fails:
        detail += "; failures: " + "; ".join(fails[:5])
    return not fails, detail


def ac4():
    rng = np.random.default_rng(40)
    worst = 0.0
    for dim in (2, 3, 4):
        for rho, R in ((0.1, 1.0), (0.5, 1.0), (0.9, 1.0), (0.3, 2.5)):
            c = rng.uniform(-1, 1, dim)
            nest = concentric_balls(rho, R, dim=dim, center=c)
            for h in rng.standard_normal((50, dim)):
                ratio = finsler_norm(nest.outer, c, h) / finsler_norm(nest.inner, c, h)
                worst = max(worst, abs(ratio - rho / R) / (rho / R))
    return worst <= 1e-12, f"max rel deviation from rho/R {worst:.2e} over 600 (nesting, h) draws"


def ac5():
    rng = np.random.default_rng(50)
    n = 10_000
    worst1 = worst2 = math.inf
    for i in range(n):
        dim = 2 + i % 2
        x0 = rng.uniform(-2, 2, dim)
        R = rng.uniform(0.5, 5.0)
        obstacles = [ClosedBallExterior(x0, R)]
        for _ in range(rng.integers(0, 3)):
            obstacles.append(ClosedBall(x0 + _uniform_ball(rng, 1, dim, R)[0], rng.uniform(0.05, 0.3) * R))
        u = x0 + _uniform_ball(rng, 8, dim, R * (1 - 1e-9))
        u = [p for p in u if not any(ob.contains(p) for ob in obstacles)]
        if len(u) < 2:
            continue
        U = Domain(obstacles, u[0])
        margin = R / 2 * apollonian_distance(U, u[0], u[1]) - float(np.linalg.norm(u[0] - u[1]))
        worst1 = min(worst1, margin)
    kinds = ["ball", "ball_exterior", "half_space", "point", "mixed"]
    for i in range(n):
        dim = 2 + i % 2
        V = oracles.random_domain(kinds[i % 5], dim, rng, min_clearance=0.01)
        u1, u2 = oracles.random_points_in(V.obstacles, dim, 2, rng, min_clearance=0.01)
        r = min(distance_to_complement(V, u1), distance_to_complement(V, u2))
        margin = 2 / r * float(np.linalg.norm(u1 - u2)) - apollonian_distance(V, u1, u2)
        worst2 = min(worst2, margin)
    ok = worst1 >= -1e-9 and worst2 >= -1e-9
    return ok, f"min margin |u1-u2| <= (R/2) d_U: {worst1:.3e}; min margin d_V <= (2/r)|u1-u2|: {worst2:.3e}"


def ac6():
    rng = np.random.default_rng(60)
    worst = {"sup_log_ratio": 0.0, "support_interval": 0.0, "diameter": 0.0}
    below = 0.0
    for kind in ("ball", "ball_exterior", "half_space", "point"):
        for i in range(50):
            d = oracles.random_domain(kind, 2, rng)
            samples = oracles.complement_samples(d, 100_000, seed=i)
            x1, x2 = oracles.random_points_in(d.obstacles, 2, 2, rng)
            c, o = sup_log_ratio(d, x1, x2), oracles.sup_log_ratio(samples, x1, x2)
            below = min(below, c - o)
            worst["sup_log_ratio"] = max(worst["sup_log_ratio"], abs(c - o))
            h = rng.standard_normal(2)
            lo, hi = support_interval(d, x1, h)
            olo, ohi = oracles.support_interval(samples, x1, h)
            below = min(below, (olo - lo) / max(1, abs(lo)), (hi - ohi) / max(1, abs(hi)))
            gap = max(abs(olo - lo) / max(1, abs(lo)), abs(hi - ohi) / max(1, abs(hi)))
            worst["support_interval"] = max(worst["support_interval"], gap)
            g, og = diameter_of_inverted_complement(d, x1), oracles.density(samples, x1)
            below = min(below, (g - og) / max(1, g))
            worst["diameter"] = max(worst["diameter"], abs(g - og) / max(1, g))
    ok = below >= -1e-9 and max(worst.values()) <= 1e-3
    detail = ", ".join(f"{k} max gap {v:.2e}" for k, v in worst.items())
    return ok, f"200 domains, 1e5 samples each; {detail}; worst domination slack {below:.1e}"


def ac7():
    shift = np.array([0.5, 0.0])
    gens = [ConformalMap([Translation(-shift), Homothety(0.25)], 2),
            ConformalMap([Translation(shift), Homothety(0.25)], 2)]
    system = IfsSystem(concentric_balls(0.75, 1.0), gens)
    cover = limit_cover(system, 12)
    n_ok = len(cover) == 4096
    law_ok = bool(np.all(cover.apollonian_diameters <= cover.bound * (1 + 1e-9)))
    bc = box_count(cover.centers, [2.0**-k for k in range(3, 12)])
    bound = dimension_bound(system.k, system.delta)
    slope_ok = abs(bc.slope - 0.5) <= 0.05 and bc.slope <= bound
    bound_ok = abs(bound - math.log(2) / math.log(4 / 3)) <= 1e-9
    detail = (f"cells {len(cover)}; max cell diameter {cover.apollonian_diameters.max():.3e} <= r = {cover.bound:.4e}; "
              f"slope {bc.slope:.4f}; dimension bound {bound:.12f}")
    return n_ok and law_ok and slope_ok and bound_ok, detail


def ac8():
    rng = np.random.default_rng(80)
    kinds = ["ball", "ball_exterior", "half_space", "point", "mixed"]
    worst_c = worst_d = 0.0
    for i in range(10_000):
        dim = 1 + i % 5
        m = random_map(dim, rng)
        pts = [rng.uniform(-2, 2, dim) for _ in range(4)]
        a, b = cross_ratio(*pts), cross_ratio(*[m(p) for p in pts])
        worst_c = max(worst_c, abs(a - b) / a)
        d = oracles.random_domain(kinds[i % 5], dim, rng)
        x, y = oracles.random_points_in(d.obstacles, dim, 2, rng)
        a = apollonian_distance(d, x, y)
        b = apollonian_distance(d.transformed(m), m(x), m(y))
        worst_d = max(worst_d, abs(a - b) / a if a > 0 else abs(b))
    ok = worst_c <= 1e-9 and worst_d <= 1e-9
    return ok, f"10000 draws in dims 1-5: cross-ratio max rel err {worst_c:.2e}, distance max rel err {worst_d:.2e}"


def ac9():
    rng = np.random.default_rng(90)
    worst_f = worst_d = 0.0
    for p in (np.array([0.3, -0.2]), INF):
        for _ in range(200):
            x = rng.uniform(-3, 3, 2)
            d = Domain([SinglePoint(p)], x)
            h = rng.standard_normal(2)
            worst_f = max(worst_f, finsler_norm(d, x, h), conformal_density(d, x))
            y = 2 * p - x if p is not INF else rng.uniform(-3, 3, 2)
            worst_d = max(worst_d, apollonian_distance(d, x, y))
            worst_d = max(worst_d, inner_path_length(d, PathPolyline.of(x, 0.5 * (x + y) + 0.1, y), order=4))
    ok = worst_f == 0.0 and worst_d == 0.0
    return ok, f"max finsler/density {worst_f!r}, max distance/path length between distinct points {worst_d!r}"


CRITERIA = {"AC1": ac1, "AC2": ac2, "AC3": ac3, "AC4": ac4, "AC5": ac5, "AC6": ac6, "AC7": ac7, "AC8": ac8, "AC9": ac9}


def evaluate(key: str) -> bool:
    start = time.perf_counter()
    ok, detail = CRITERIA[key]()
    line = f"{key} {'PASS' if ok else 'FAIL'} {TITLES[key]}: {detail} [{time.perf_counter() - start:.1f}s]"
    RESULTS[key] = line
    print(line)
    return ok


@pytest.mark.parametrize("key", list(CRITERIA))
def test_acceptance(key):
    assert evaluate(key), RESULTS[key]


if __name__ == "__main__":
    results = [evaluate(k) for k in CRITERIA]
    sys.exit(0 if all(results) else 1)
