# -*- encoding: utf-8 -*-
"""
gricci Geometry - hyperbolic configuration spaces, propagator forms and cutoffs.

Usage:
    from gricci.geometry import ConfigPoint, Model, eval_p0, geodesic_endpoints

    cfg = ConfigPoint(Model.HALFSPACE, [0, 0, 1], [1, 0, 1])
    z1, z2 = geodesic_endpoints(cfg)
"""

from gricci.geometry.coords import (
    HalfspaceCoords,
    VerticalCoords,
    from_halfspace_coords,
    to_halfspace_coords,
)
from gricci.geometry.cutoff import (
    CutoffSpec,
    boundary_distance,
    cutoff_theta,
    fibonacci_sphere,
    theta_values,
)
from gricci.geometry.hyperbolic import (
    BoundaryPoint,
    ConfigPoint,
    MobiusIsometry,
    Model,
    ball_to_halfspace,
    geodesic_endpoints,
    halfspace_to_ball,
    is_vertical,
    orthogonality_residual,
    random_isometry,
    sample_configurations,
)
from gricci.geometry.jet import Jet
from gricci.geometry.parser import CutoffParser, parse_cutoff
from gricci.geometry.propagator import (
    eval_p0,
    eval_p0_coordinates,
    eval_p0bar,
    eval_p1,
    eval_p1_coordinates,
    p0_chart,
    p0_components,
    p1_chart,
    p1_components,
)

__all__ = [
    "HalfspaceCoords",
    "VerticalCoords",
    "from_halfspace_coords",
    "to_halfspace_coords",
    "CutoffSpec",
    "boundary_distance",
    "cutoff_theta",
    "fibonacci_sphere",
    "theta_values",
    "BoundaryPoint",
    "ConfigPoint",
    "MobiusIsometry",
    "Model",
    "ball_to_halfspace",
    "geodesic_endpoints",
    "halfspace_to_ball",
    "is_vertical",
    "orthogonality_residual",
    "random_isometry",
    "sample_configurations",
    "Jet",
    "CutoffParser",
    "parse_cutoff",
    "eval_p0",
    "eval_p0_coordinates",
    "eval_p0bar",
    "eval_p1",
    "eval_p1_coordinates",
    "p0_chart",
    "p0_components",
    "p1_chart",
    "p1_components",
]
