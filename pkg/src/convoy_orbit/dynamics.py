"""Unicycle agent kinematics and ground-target motion models."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Union

from .geometry import Vec2, wrap_angle
from .regression import ConvoySnapshot


@dataclass(frozen=True)
class Pose2D:
    position: Vec2
    psi: float

    def __post_init__(self):
        object.__setattr__(self, "position", Vec2(float(self.position[0]), float(self.position[1])))
        object.__setattr__(self, "psi", wrap_angle(self.psi))


@dataclass(frozen=True)
class AgentState:
    pose: Pose2D
    V_A: float

    @property
    def x(self) -> float:
        return self.pose.position.x

    @property
    def y(self) -> float:
        return self.pose.position.y

    @property
    def psi(self) -> float:
        return self.pose.psi


@dataclass(frozen=True)
class Wind:
    V_w: float = 0.0
    psi_w: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.V_w) and math.isfinite(self.psi_w)):
            raise ValueError("wind speed and heading must be finite")
        if self.V_w < 0.0:
            raise ValueError(f"invariant V_w >= 0 violated: V_w={self.V_w}")

    @property
    def velocity(self) -> Vec2:
        return Vec2(self.V_w * math.cos(self.psi_w), self.V_w * math.sin(self.psi_w))


CALM = Wind()


def step_unicycle(s: AgentState, omega: float, wind: Wind, dt: float) -> AgentState:
    """One RK4 step of the unicycle with turn rate held over the step."""
    if not dt > 0.0:
        raise ValueError(f"time step must be positive, got dt={dt}")
    v = s.V_A
    wx, wy = wind.velocity
    x, y, psi = s.x, s.y, s.psi

    # position rates depend only on heading; heading grows linearly under fixed omega
    h = 0.5 * dt
    p2 = psi + h * omega
    p4 = psi + dt * omega
    c1, s1 = math.cos(psi), math.sin(psi)
    c2, s2 = math.cos(p2), math.sin(p2)
    c4, s4 = math.cos(p4), math.sin(p4)
    dx = (v * c1 + wx) + 4.0 * (v * c2 + wx) + (v * c4 + wx)
    dy = (v * s1 + wy) + 4.0 * (v * s2 + wy) + (v * s4 + wy)
    x_new = x + dt / 6.0 * dx
    y_new = y + dt / 6.0 * dy
    return AgentState(Pose2D(Vec2(x_new, y_new), wrap_angle(p4)), v)


def lissajous_position(phi: float, A: float, B: float) -> Vec2:
    return Vec2(A * math.cos(phi), B * math.sin(2.0 * phi))


@dataclass(frozen=True)
class LissajousConvoy:
    """Targets moving along x = A cos(phi), y = B sin(2 phi) at a shared phase rate."""

    A: float
    B: float
    phi_dot: float
    phi0: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "phi0", tuple(float(p) for p in self.phi0))
        if not self.phi0:
            raise ValueError("Lissajous convoy needs at least one target")

    @property
    def n_targets(self) -> int:
        return len(self.phi0)

    def max_speed(self) -> float:
        return math.sqrt(self.A**2 + 4.0 * self.B**2) * abs(self.phi_dot)

    def positions(self, t: float) -> list[Vec2]:
        return [lissajous_position(p + self.phi_dot * t, self.A, self.B) for p in self.phi0]


@dataclass(frozen=True)
class LinearConvoy:
    """Targets on straight lines; one origin, heading and speed per target."""

    origins: tuple[Vec2, ...]
    headings: tuple[float, ...]
    speeds: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "origins", tuple(Vec2(float(o[0]), float(o[1])) for o in self.origins))
        object.__setattr__(self, "headings", tuple(float(h) for h in self.headings))
        object.__setattr__(self, "speeds", tuple(float(v) for v in self.speeds))
        n = len(self.origins)
        if n == 0 or len(self.headings) != n or len(self.speeds) != n:
            raise ValueError("linear convoy needs matching non-empty origins, headings and speeds")
        if any(v < 0.0 for v in self.speeds):
            raise ValueError("target speeds must be non-negative")

    @property
    def n_targets(self) -> int:
        return len(self.origins)

    def max_speed(self) -> float:
        return max(self.speeds)

    def positions(self, t: float) -> list[Vec2]:
        return [
            Vec2(o.x + v * t * math.cos(h), o.y + v * t * math.sin(h))
            for o, h, v in zip(self.origins, self.headings, self.speeds)
        ]


@dataclass(frozen=True)
class WaypointConvoy:
    """Targets travelling along a shared polyline by arc length.

    Each target starts at arc length ``starts[i]`` and moves at ``speeds[i]``;
    it stops at the last waypoint.
    """

    waypoints: tuple[Vec2, ...]
    speeds: tuple[float, ...]
    starts: tuple[float, ...]
    _cum: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple(Vec2(float(w[0]), float(w[1])) for w in self.waypoints)
        object.__setattr__(self, "waypoints", pts)
        object.__setattr__(self, "speeds", tuple(float(v) for v in self.speeds))
        object.__setattr__(self, "starts", tuple(float(s) for s in self.starts))
        if len(pts) < 2:
            raise ValueError("waypoint path needs at least two waypoints")
        if not self.speeds or len(self.speeds) != len(self.starts):
            raise ValueError("waypoint convoy needs matching non-empty speeds and starts")
        if any(v < 0.0 for v in self.speeds) or any(s < 0.0 for s in self.starts):
            raise ValueError("target speeds and start offsets must be non-negative")
        cum = [0.0]
        for p, q in zip(pts, pts[1:]):
            cum.append(cum[-1] + (q - p).norm())
        object.__setattr__(self, "_cum", tuple(cum))

    @property
    def n_targets(self) -> int:
        return len(self.speeds)

    @property
    def length(self) -> float:
        return self._cum[-1]

    def max_speed(self) -> float:
        return max(self.speeds)

    def point_at(self, s: float) -> Vec2:
        cum = self._cum
        if s <= 0.0:
            return self.waypoints[0]
        if s >= cum[-1]:
            return self.waypoints[-1]
        i = bisect.bisect_right(cum, s) - 1
        seg = cum[i + 1] - cum[i]
        u = (s - cum[i]) / seg if seg > 0.0 else 0.0
        p, q = self.waypoints[i], self.waypoints[i + 1]
        return Vec2(p.x + u * (q.x - p.x), p.y + u * (q.y - p.y))

    def positions(self, t: float) -> list[Vec2]:
        return [self.point_at(s0 + v * t) for s0, v in zip(self.starts, self.speeds)]


TargetModel = Union[LissajousConvoy, LinearConvoy, WaypointConvoy]


def advance_targets(model: TargetModel, t: float) -> ConvoySnapshot:
    if t < 0.0:
        raise ValueError(f"time must be non-negative, got t={t}")
    return ConvoySnapshot(tuple(model.positions(t)))


def lissajous_spacing(n: int, step: float) -> tuple[float, ...]:
    """Initial phases (i-1)*step for targets i = 1..n."""
    return tuple(i * step for i in range(n))

