"""Planar frame transforms, ellipse level sets and closed-form ellipse bounds.

Everything here is a pure function over small immutable value types. The
rotation convention is the passive one: ``R(theta)`` maps global coordinates
into a frame whose x axis is tilted by ``theta``::

    R(theta) = [[ cos theta, sin theta],
                [-sin theta, cos theta]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

TWO_PI = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Normalize an angle into (-pi, pi]."""
    wrapped = math.remainder(angle, TWO_PI)
    if wrapped <= -math.pi:
        return math.pi
    return wrapped


def atan2_or_zero(y: float, x: float) -> float:
    # the direction of a zero vector is defined as 0
    if x == 0.0 and y == 0.0:
        return 0.0
    return math.atan2(y, x)


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other):  # type: ignore[override]
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def scale(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    def dot(self, other) -> float:
        return self.x * other[0] + self.y * other[1]

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


@dataclass(frozen=True)
class FrameTilt:
    """A frame with its origin at ``origin`` and x axis tilted by ``theta``."""

    origin: Vec2
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "origin", Vec2(*self.origin))
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class EllipseSpec:
    """Tilted ellipse with semi-major axis ``a`` along direction ``theta_E``."""

    center: Vec2
    a: float
    b: float
    theta_E: float

    def __post_init__(self):
        center = Vec2(float(self.center[0]), float(self.center[1]))
        if not center.is_finite():
            raise ValueError(f"ellipse center must be finite, got {center}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"ellipse axes must be finite, got a={self.a}, b={self.b}")
        if not self.b > 0.0:
            raise ValueError(f"ellipse requires b > 0, got b={self.b}")
        if self.a < self.b:
            raise ValueError(f"ellipse requires a >= b, got a={self.a}, b={self.b}")
        if not math.isfinite(self.theta_E):
            raise ValueError(f"ellipse tilt must be finite, got {self.theta_E}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "theta_E", wrap_angle(self.theta_E))

    @property
    def frame(self) -> FrameTilt:
        return FrameTilt(self.center, self.theta_E)

    def area(self) -> float:
        return math.pi * self.a * self.b


def rotate_into(x: float, y: float, theta: float) -> tuple[float, float]:
    """Apply R(theta) to the vector (x, y)."""
    c, s = math.cos(theta), math.sin(theta)
    return c * x + s * y, -s * x + c * y


def rotate_out(x: float, y: float, theta: float) -> tuple[float, float]:
    """Apply R(theta)^-1 = R(theta)^T to the vector (x, y)."""
    c, s = math.cos(theta), math.sin(theta)
    return c * x - s * y, s * x + c * y


def to_frame(p: Vec2, f: FrameTilt) -> Vec2:
    return Vec2(*rotate_into(p[0] - f.origin.x, p[1] - f.origin.y, f.theta))


def from_frame(p_local: Vec2, f: FrameTilt) -> Vec2:
    x, y = rotate_out(p_local[0], p_local[1], f.theta)
    return Vec2(x + f.origin.x, y + f.origin.y)


def level_local(x: float, y: float, a: float, b: float) -> float:
    return x * x / (a * a) + y * y / (b * b)


def ellipse_level(p: Vec2, e: EllipseSpec) -> float:
    """Level-set value x_E^2/a^2 + y_E^2/b^2 of ``p`` relative to ``e``.

    Equals 1 on the ellipse, is below 1 inside and above 1 outside.
    """
    x, y = rotate_into(p[0] - e.center.x, p[1] - e.center.y, e.theta_E)
    return level_local(x, y, e.a, e.b)


def min_area_circumscribing_axes(l1: float, l2: float) -> tuple[float, float]:
    """Semi-axes of the least-area ellipse through the corners of an l1 x l2 rectangle.

    The rectangle must already be oriented so that ``l1`` is the long side.
    """
    if not l1 > 0.0:
        raise ValueError(f"rectangle length l1 must be positive, got {l1}")
    if l2 < 0.0:
        raise ValueError(f"rectangle width l2 must be non-negative, got {l2}")
    if l1 < l2:
        raise ValueError(f"rectangle must satisfy l1 >= l2, got l1={l1}, l2={l2}")
    return l1 / math.sqrt(2.0), l2 / math.sqrt(2.0)


def min_radius_of_curvature(a: float, b: float) -> float:
    """Smallest radius of curvature along an ellipse with semi-axes a >= b > 0.

    Attained at the ends of the major axis.
    """
    if not (b > 0.0 and a >= b):
        raise ValueError(f"expected a >= b > 0, got a={a}, b={b}")
    return b * b / a
