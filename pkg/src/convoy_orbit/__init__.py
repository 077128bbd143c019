"""Aerial convoy surveillance on a moving bounding ellipse.

A ground convoy is wrapped in a bounding rectangle by convoy-centric line
regression, the least-area ellipse through the rectangle's corners (with
turn-radius floors) becomes the orbit, and a unicycle agent is steered onto
it by a vector-field heading law.
"""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    EllipseSpec,
    FrameTilt,
    Vec2,
    ellipse_level,
    from_frame,
    min_area_circumscribing_axes,
    min_radius_of_curvature,
    to_frame,
    wrap_angle,
)
from .guidance import GuidanceGains, OrbitDirection  # noqa: E402
from .regression import ConvoySnapshot, RegressionFrame, init_regression, update_regression  # noqa: E402
from .simulation import AgentLimits, SimConfig, SimTrace, run_simulation, select_axes  # noqa: E402

__all__ = [
    "AgentLimits",
    "ConvoySnapshot",
    "EllipseSpec",
    "FrameTilt",
    "GuidanceGains",
    "OrbitDirection",
    "RegressionFrame",
    "SimConfig",
    "SimTrace",
    "Vec2",
    "ellipse_level",
    "from_frame",
    "init_regression",
    "min_area_circumscribing_axes",
    "min_radius_of_curvature",
    "run_simulation",
    "select_axes",
    "to_frame",
    "update_regression",
    "wrap_angle",
]
