"""Apollonian metric geometry on the one-point completion of R^n."""

__version__ = "0.1.0"

from .apollonian import (
    PathPolyline,
    apollonian_distance,
    conformal_density,
    finsler_norm,
    hyperbolic_ball_distance,
    inner_path_length,
    riemann_path_length,
)
from .conformal import ConformalMap, compose, image_region, image_sphere, inverse
from .contraction import (
    ContractionReport,
    NestedPair,
    birkhoff_coefficient,
    birkhoff_grid_check,
    concentric_balls,
    diameter,
    hilbert_1d,
    in_gamma,
    j_metric,
    lipschitz_report,
    nested_pair,
    verify_ucp,
)
from .domain import (
    ClosedBall,
    ClosedBallExterior,
    ClosedHalfSpace,
    Domain,
    SinglePoint,
    diameter_of_inverted_complement,
    inverted_complement,
    sup_log_ratio,
    support_interval,
)
from .extgeom import INF, Hyperplane, Region, Sphere, apollonian_ball, chordal_distance, cross_ratio
from .fractal import IfsSystem, box_count, dimension_bound, limit_cover

__all__ = [
    "ClosedBall",
    "ClosedBallExterior",
    "ClosedHalfSpace",
    "ConformalMap",
    "ContractionReport",
    "Domain",
    "Hyperplane",
    "INF",
    "IfsSystem",
    "NestedPair",
    "PathPolyline",
    "Region",
    "SinglePoint",
    "Sphere",
    "apollonian_ball",
    "apollonian_distance",
    "birkhoff_coefficient",
    "birkhoff_grid_check",
    "box_count",
    "chordal_distance",
    "compose",
    "concentric_balls",
    "conformal_density",
    "cross_ratio",
    "diameter",
    "diameter_of_inverted_complement",
    "dimension_bound",
    "finsler_norm",
    "hilbert_1d",
    "hyperbolic_ball_distance",
    "image_region",
    "image_sphere",
    "in_gamma",
    "inner_path_length",
    "inverse",
    "inverted_complement",
    "j_metric",
    "limit_cover",
    "lipschitz_report",
    "nested_pair",
    "riemann_path_length",
    "sup_log_ratio",
    "support_interval",
    "verify_ucp",
]
