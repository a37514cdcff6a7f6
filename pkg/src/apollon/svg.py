"""Static SVG rendering of 2-D scenes."""
from __future__ import annotations

import numpy as np

from .domain import ClosedBall, ClosedBallExterior, ClosedHalfSpace, Domain, SinglePoint
from .extgeom import INF, Region, Sphere


def _f(x: float) -> str:
    return format(float(x), ".6f").rstrip("0").rstrip(".")


class Canvas:
    """Maps the viewport [xmin, xmax] x [ymin, ymax] to pixels, y axis up."""

    def __init__(self, viewport, width: int = 600):
        self.xmin, self.ymin, self.xmax, self.ymax = map(float, viewport)
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(f"degenerate viewport {viewport}")
        self.width = int(width)
        self.scale = self.width / (self.xmax - self.xmin)
        self.height = int(round((self.ymax - self.ymin) * self.scale))
        self.items: list[str] = []

    def px(self, p) -> tuple[float, float]:
        return (p[0] - self.xmin) * self.scale, (self.ymax - p[1]) * self.scale

    def corners(self) -> np.ndarray:
        return np.array([
            [self.xmin, self.ymin], [self.xmax, self.ymin], [self.xmax, self.ymax], [self.xmin, self.ymax],
        ])

    def circle(self, center, radius, style: str):
        x, y = self.px(center)
        self.items.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(radius * self.scale)}" {style}/>')

    def polygon(self, pts, style: str):
        if len(pts) < 3:
            return
        coords = " ".join(f"{_f(a)},{_f(b)}" for a, b in (self.px(p) for p in pts))
        self.items.append(f'<polygon points="{coords}" {style}/>')

    def line(self, a, b, style: str):
        (x1, y1), (x2, y2) = self.px(a), self.px(b)
        self.items.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" {style}/>')

    def exterior(self, center, radius, style: str):
        x0, y0 = self.px((self.xmin, self.ymax))
        cx, cy = self.px(center)
        r = radius * self.scale
        d = (
            f"M{_f(x0)},{_f(y0)} h{_f(self.width)} v{_f(self.height)} h{_f(-self.width)} Z "
            f"M{_f(cx - r)},{_f(cy)} a{_f(r)},{_f(r)} 0 1,0 {_f(2 * r)},0 a{_f(r)},{_f(r)} 0 1,0 {_f(-2 * r)},0 Z"
        )
        self.items.append(f'<path d="{d}" fill-rule="evenodd" {style}/>')

    def half_plane(self, normal, offset, style: str):
        """Fill {<normal, x> >= offset} clipped to the viewport."""
        pts = self.corners()
        out = []
        for i in range(len(pts)):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            fa, fb = normal @ a - offset, normal @ b - offset
            if fa >= 0:
                out.append(a)
            if (fa >= 0) != (fb >= 0):
                t = fa / (fa - fb)
                out.append(a + t * (b - a))
        self.polygon(out, style)

    def boundary_line(self, normal, offset, style: str):
        foot = normal * offset
        tangent = np.array([-normal[1], normal[0]])
        span = 2.0 * max(self.xmax - self.xmin, self.ymax - self.ymin) + float(np.linalg.norm(foot))
        self.line(foot - span * tangent, foot + span * tangent, style)

    def render(self, comment: str) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        mapping = (
            f"viewport x:[{self.xmin!r}, {self.xmax!r}] y:[{self.ymin!r}, {self.ymax!r}] -> "
            f"{self.width}x{self.height} px, pixel = ((x - {self.xmin!r}) * {self.scale!r}, "
            f"({self.ymax!r} - y) * {self.scale!r})"
        )
        body = "\n".join(self.items)
        return f"{head}\n<!-- {mapping} -->\n<!-- {comment} -->\n{body}\n</svg>\n"


OBSTACLE_STYLE = 'fill="#b0b0b0" stroke="#404040" stroke-width="1"'
POINT_STYLE = 'fill="#1f4e9c"'
BALL_STYLE = 'fill="none" stroke="#c0392b" stroke-width="1.5"'
CELL_STYLE = 'fill="#2e7d32" fill-opacity="0.6" stroke="none"'


def draw_domain(canvas: Canvas, d: Domain):
    for ob in d.obstacles:
        if isinstance(ob, ClosedBall):
            canvas.circle(ob.center, ob.radius, OBSTACLE_STYLE)
        elif isinstance(ob, ClosedBallExterior):
            canvas.exterior(ob.center, ob.radius, OBSTACLE_STYLE)
        elif isinstance(ob, ClosedHalfSpace):
            canvas.half_plane(ob.normal, ob.offset, OBSTACLE_STYLE)
        elif isinstance(ob, SinglePoint) and ob.point is not INF:
            canvas.circle(ob.point, 3.0 / canvas.scale, 'fill="#404040"')


def draw_region_boundary(canvas: Canvas, r: Region, style: str = BALL_STYLE):
    s = r.surface
    if isinstance(s, Sphere):
        canvas.circle(s.center, s.radius, style)
    else:
        canvas.boundary_line(s.normal, s.offset, style)


def draw_points(canvas: Canvas, points, style: str = POINT_STYLE, radius_px: float = 2.0):
    for p in points:
        canvas.circle(p, radius_px / canvas.scale, style)
