"""Command-line front end: ``apollon <subcommand> --scene <file>``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on input
errors.  Outputs are deterministic for a fixed scene and seed.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .apollonian import (
    PathPolyline,
    apollonian_distance,
    conformal_density,
    finsler_norm,
    inner_path_length,
    riemann_path_length,
)
from .conformal import image_region, inverse
from .contraction import birkhoff_grid_check, in_gamma, lipschitz_report, verify_ucp
from .domain import default_box, sample_points
from .errors import ApollonError
from .extgeom import INF, Region, Sphere, apollonian_ball
from .fractal import box_count, dimension_bound, limit_cover, normalizer
from .scene import Scene, SceneError, _point, _vector, load_scene
from . import svg

COMMANDS = ("dist", "density", "finsler", "contract-check", "birkhoff", "ifs", "render")
DEFAULT_SAMPLES = 1000
DEFAULT_DEPTH = 8
DEFAULT_SCALES = [2.0**-k for k in range(3, 12)]


def _num(x) -> str:
    if x is INF:
        return "inf"
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _pt(p) -> str:
    if p is INF:
        return "inf"
    return "(" + ", ".join(_num(c) for c in p) + ")"


class Run:
    def __init__(self, scene: Scene, command: str, args):
        self.scene = scene
        self.command = command
        self.args = args
        self.seed = args.seed if args.seed is not None else scene.spec.seed
        self.rng = np.random.default_rng(self.seed)
        self.tol = args.tol
        self.out = Path(args.out) if args.out else None
        self.lines = [
            f"apollon {__version__}",
            f"scene: {scene.name} sha256:{scene.digest}",
            f"command: {command}",
            f"seed: {self.seed}",
        ]
        self.ok = True

    def say(self, line: str = ""):
        self.lines.append(line)

    def check(self, label: str, passed: bool, detail: str):
        self.ok &= bool(passed)
        self.say(f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}")

    def write(self, name: str, text: str):
        out = self.out or Path(".")
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
        self.say(f"wrote {name}")

    def command_spec(self, key: str):
        spec = getattr(self.scene.spec.commands, key)
        if spec is None:
            raise SceneError(f"commands.{self.command}", "missing section for this command")
        return spec


def cmd_dist(run: Run):
    c = run.command_spec("dist")
    d = run.scene.domain(c.domain, "commands.dist.domain")
    run.say(f"domain: {c.domain}")
    run.say("x1\tx2\tapollonian_distance")
    for i, (a, b) in enumerate(c.pairs):
        x1, x2 = _parse_pair(run.scene, a, b, f"commands.dist.pairs.{i}")
        if not (d.contains(x1) and d.contains(x2)):
            raise SceneError(f"commands.dist.pairs.{i}", "point outside the domain")
        run.say(f"{_pt(x1)}\t{_pt(x2)}\t{_num(apollonian_distance(d, x1, x2))}")


def _parse_pair(scene, a, b, path):
    return _point(a, scene.dim, path + ".0"), _point(b, scene.dim, path + ".1")


def _grid(lo, hi, n):
    axes = [np.linspace(a, b, n) for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def cmd_density(run: Run):
    c = run.command_spec("density")
    d = run.scene.domain(c.domain, "commands.density.domain")
    dim = run.scene.dim
    if len(c.lo) != dim or len(c.hi) != dim:
        raise SceneError("commands.density", f"lo/hi must have {dim} coordinates")
    pts = _grid(c.lo, c.hi, c.n)
    header = ",".join([f"x{i}" for i in range(dim)] + ["density"])
    rows = [header]
    vals = []
    for p in pts:
        if d.contains(p):
            g = conformal_density(d, p)
            vals.append(g)
            rows.append(",".join([_num(v) for v in p] + [_num(g)]))
        else:
            rows.append(",".join([_num(v) for v in p] + [""]))
    run.say(f"domain: {c.domain}, grid {c.n}^{dim}, points in U: {len(vals)}")
    if vals:
        run.say(f"density min {_num(min(vals))} max {_num(max(vals))}")
    run.write("density.csv", "\n".join(rows) + "\n")


def cmd_finsler(run: Run):
    c = run.command_spec("finsler")
    d = run.scene.domain(c.domain, "commands.finsler.domain")
    run.say(f"domain: {c.domain}")
    run.say("x\th\tfinsler_norm\tdensity_times_norm")
    for i, p in enumerate(c.points):
        x = _vector(p, run.scene.dim, f"commands.finsler.points.{i}")
        if not d.contains(x):
            raise SceneError(f"commands.finsler.points.{i}", "point outside the domain")
        g = conformal_density(d, x)
        for j, h in enumerate(c.directions):
            hv = _vector(h, run.scene.dim, f"commands.finsler.directions.{j}")
            run.say(f"{_pt(x)}\t{_pt(hv)}\t{_num(finsler_norm(d, x, hv))}\t{_num(g * np.linalg.norm(hv))}")


def cmd_contract_check(run: Run):
    c = run.command_spec("contract_check")
    nest = run.scene.nesting(c.nesting, "commands.contract-check.nesting")
    n = run.args.samples or c.samples or DEFAULT_SAMPLES
    U, V = nest.inner, nest.outer
    theta = nest.coefficient
    run.say(f"nesting: {c.nesting}")
    run.say(f"delta: {_num(nest.delta)} ({nest.provenance})")
    run.say(f"bound tanh(delta/4): {_num(theta)}")
    if not nest.certified:
        raise SceneError(
            f"nestings.{c.nesting}",
            "diameter is a sampled lower bound and cannot certify the contraction; "
            "use a nesting of generalized balls",
        )
    lo, hi = (c.lo, c.hi) if c.lo is not None and c.hi is not None else default_box(U)
    pts = sample_points(U, 2 * n, run.rng, lo, hi)
    pairs = list(zip(pts[0::2], pts[1::2]))
    rep = verify_ucp(nest, pairs, tol=run.tol)
    run.check("ucp d_V <= theta d_U", rep.passed, rep.summary())

    # infinitesimal and integrated consequences
    worst_p = worst_g = 0.0
    for x in pts[:n]:
        h = run.rng.standard_normal(run.scene.dim)
        pu = finsler_norm(U, x, h)
        if pu > 0:
            worst_p = max(worst_p, finsler_norm(V, x, h) / pu)
        gu = conformal_density(U, x)
        if gu > 0:
            worst_g = max(worst_g, conformal_density(V, x) / gu)
    run.check("finsler p_V <= theta p_U", worst_p <= theta + run.tol, f"max ratio {_num(worst_p)}")
    run.check("density g_V <= theta g_U", worst_g <= theta + run.tol, f"max ratio {_num(worst_g)}")

    worst_inner = worst_riem = 0.0
    done = 0
    for a, b in pairs:
        if done >= c.paths:
            break
        mid = 0.5 * (a + b) + 0.1 * run.rng.standard_normal(run.scene.dim) * np.linalg.norm(b - a)
        path = PathPolyline.of(a, mid, b)
        try:
            iu, ru = inner_path_length(U, path, 16), riemann_path_length(U, path, 16)
        except ApollonError:
            continue
        iv, rv = inner_path_length(V, path, 16), riemann_path_length(V, path, 16)
        if iu > 0:
            worst_inner = max(worst_inner, iv / iu)
        if ru > 0:
            worst_riem = max(worst_riem, rv / ru)
        done += 1
    run.check("inner length_V <= theta length_U", worst_inner <= theta + run.tol,
              f"max ratio {_num(worst_inner)} over {done} paths")
    run.check("riemann length_V <= theta length_U", worst_riem <= theta + run.tol,
              f"max ratio {_num(worst_riem)} over {done} paths")

    if c.maps:
        vpts = sample_points(V, 2 * n, run.rng, *default_box(V))
        vpairs = list(zip(vpts[0::2], vpts[1::2]))
        for i, name in enumerate(c.maps):
            m = run.scene.map(name, f"commands.contract-check.maps.{i}")
            member = in_gamma(m, nest)
            run.check(f"map {name} in Gamma(V, U)", member, "image of V inside U" if member else "image of V leaves U")
            if member:
                lr = lipschitz_report(m, nest, vpairs, tol=run.tol)
                run.check(f"map {name} lipschitz on (V, d_V)", lr.passed, lr.summary())


def cmd_birkhoff(run: Run):
    c = run.command_spec("birkhoff")
    a1, a2 = c.interval
    try:
        g = birkhoff_grid_check((a1, a2), c.grid)
    except ValueError as exc:
        raise SceneError("commands.birkhoff.interval", str(exc)) from exc
    geo = math.sqrt(a1 * a2)
    run.say(f"K = ({_num(a1)}, {_num(a2)}) in J = (0, inf), grid {c.grid}x{c.grid}")
    run.say(f"theta = tanh(log(a2/a1)/4) = {_num(g.bound)}")
    run.say(f"closed form (sqrt(a2)-sqrt(a1))/(sqrt(a2)+sqrt(a1)) = {_num((math.sqrt(a2) - math.sqrt(a1)) / (math.sqrt(a2) + math.sqrt(a1)))}")
    run.say(f"grid max d_J/d_K = {_num(g.max_ratio)} at ({_num(g.argmax_pair[0])}, {_num(g.argmax_pair[1])})")
    run.say(f"infinitesimal ratio max = {_num(g.infinitesimal_max)} at s = {_num(g.infinitesimal_argmax)} "
            f"(sqrt(a1 a2) = {_num(geo)})")
    run.check("grid ratio <= theta", g.max_ratio <= g.bound + run.tol, f"margin {_num(g.bound - g.max_ratio)}")


def cmd_ifs(run: Run):
    c = run.command_spec("ifs")
    system = run.scene.system(c.system, "commands.ifs.system")
    depth = run.args.depth or c.depth or DEFAULT_DEPTH
    cover = limit_cover(system, depth)
    scales = c.scales or DEFAULT_SCALES
    try:
        bc = box_count(cover.centers, scales)
    except ValueError as exc:
        raise SceneError("commands.ifs.scales", str(exc)) from exc
    bound = dimension_bound(system.k, system.delta)
    dim = run.scene.dim
    header = ",".join(["word"] + [f"c{i}" for i in range(dim)] + ["euclidean_radius", "apollonian_diameter", "diameter_bound"])
    rows = [header]
    for label, center, radius, apo in zip(cover.word_labels(), cover.centers, cover.radii, cover.apollonian_diameters):
        rows.append(",".join([label] + [_num(v) for v in center] + [_num(radius), _num(apo), _num(cover.bound)]))
    run.say(f"system: {c.system}, generators {system.k}, depth {depth}, cells {len(cover)}")
    run.say(f"delta: {_num(system.delta)}, theta: {_num(system.coefficient)}")
    run.say(f"certified cell diameter bound r = delta * theta^(n-1) = {_num(cover.bound)}")
    run.say(f"dimension bound log k / -log theta = {_num(bound)}")
    run.say("box counts: " + " ".join(f"{_num(s)}:{int(n)}" for s, n in zip(bc.scales, bc.counts)))
    run.say(f"box-count slope: {_num(bc.slope)} (residual {_num(bc.residual)})")
    worst = float(np.max(cover.apollonian_diameters))
    run.check("cell apollonian diameters <= r", worst <= cover.bound * (1 + 1e-9) + run.tol,
              f"max {_num(worst)}")
    euclid_ok = float(np.max(2 * cover.radii)) <= cover.outer_radius / 2 * cover.bound * (1 + 1e-9)
    run.check("euclidean cell diameters <= (R/2) r", euclid_ok, f"max {_num(2 * np.max(cover.radii))}")
    run.check("box-count slope <= dimension bound + 0.1", bc.slope <= bound + 0.1, f"{_num(bc.slope)} vs {_num(bound)}")
    run.write("ifs_cover.csv", "\n".join(rows) + "\n")


def cmd_render(run: Run):
    c = run.command_spec("render")
    if run.scene.dim != 2:
        raise SceneError("dimension", "render needs a 2-D scene")
    canvas = svg.Canvas(c.viewport, c.width)
    for i, name in enumerate(c.domains):
        svg.draw_domain(canvas, run.scene.domain(name, f"commands.render.domains.{i}"))
    if c.ifs:
        system = run.scene.system(c.ifs, "commands.render.ifs")
        depth = run.args.depth or c.depth or 6
        cover = limit_cover(system, depth)
        back = inverse(normalizer(system))
        for center, radius in zip(cover.centers, cover.radii):
            r = image_region(back, Region(Sphere(center, radius), "inside"))
            if r.is_ball:
                canvas.circle(r.surface.center, r.surface.radius, svg.CELL_STYLE)
        run.say(f"limit-set cells: {len(cover)} at depth {depth}")
    for i, b in enumerate(c.apollonian_balls):
        try:
            svg.draw_region_boundary(canvas, apollonian_ball(b.a, b.b, b.alpha))
        except ValueError as exc:
            raise SceneError(f"commands.render.apollonian_balls.{i}", str(exc)) from exc
    pts = [np.asarray(p, float) for p in c.points]
    if c.samples_from:
        d = run.scene.domain(c.samples_from, "commands.render.samples_from")
        n = run.args.samples or 200
        lo = np.array([c.viewport[0], c.viewport[1]])
        hi = np.array([c.viewport[2], c.viewport[3]])
        pts.extend(sample_points(d, n, run.rng, lo, hi))
    svg.draw_points(canvas, pts)
    run.say(f"points: {len(pts)}, apollonian balls: {len(c.apollonian_balls)}")
    run.write("render.svg", canvas.render(f"apollon {__version__} scene sha256:{run.scene.digest}"))


HANDLERS = {
    "dist": cmd_dist,
    "density": cmd_density,
    "finsler": cmd_finsler,
    "contract-check": cmd_contract_check,
    "birkhoff": cmd_birkhoff,
    "ifs": cmd_ifs,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apollon", description="Apollonian metric geometry on scene files.")
    parser.add_argument("--version", action="version", version=f"apollon {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scene", required=True, help="scene JSON file")
        p.add_argument("--out", default=None, help="output directory for report, CSV and SVG files")
        p.add_argument("--seed", type=_u64, default=None, help="64-bit unsigned seed (overrides the scene)")
        p.add_argument("--samples", type=_positive, default=None, help="sample count (overrides the scene)")
        p.add_argument("--depth", type=_positive, default=None, help="cover depth (overrides the scene)")
        p.add_argument("--tol", type=float, default=1e-9)
    return parser


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _u64(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        scene = load_scene(args.scene)
        run = Run(scene, args.command, args)
        HANDLERS[args.command](run)
    except ApollonError as exc:
        print(f"apollon: input error: {exc}", file=sys.stderr)
        return 2
    run.say(f"result: {'PASS' if run.ok else 'FAIL'}")
    text = "\n".join(run.lines) + "\n"
    sys.stdout.write(text)
    if run.out is not None:
        run.out.mkdir(parents=True, exist_ok=True)
        (run.out / f"{args.command}.txt").write_text(text)
    return 0 if run.ok else 1


if __name__ == "__main__":
    sys.exit(main())
