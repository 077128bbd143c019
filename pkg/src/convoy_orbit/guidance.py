"""Vector-field heading guidance onto an ellipse.

All quantities are expressed in the ellipse-centred frame: the agent
position is (x_E, y_E) relative to the ellipse centre along its axes and
the agent heading is psi_E = psi_A - theta_E.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .geometry import Vec2, atan2_or_zero, level_local, wrap_angle


class OrbitDirection(enum.Enum):
    CCW = "ccw"
    CW = "cw"

    @classmethod
    def parse(cls, value) -> OrbitDirection:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"orbit direction must be 'ccw' or 'cw', got {value!r}") from None


@dataclass(frozen=True)
class GuidanceGains:
    k_gamma: float
    k_psi: float

    def __post_init__(self):
        if not (math.isfinite(self.k_gamma) and self.k_gamma > 0.0):
            raise ValueError(f"invariant k_gamma > 0 violated: k_gamma={self.k_gamma}")
        if not (math.isfinite(self.k_psi) and self.k_psi > 0.0):
            raise ValueError(f"invariant k_psi > 0 violated: k_psi={self.k_psi}")


class FieldHeading(NamedTuple):
    psi_T: float
    psi_O: float
    psi_D: float
    gamma: float


class HeadingCommand(NamedTuple):
    psi_T: float
    psi_O: float
    psi_D: float
    gamma: float
    omega_raw: float
    omega: float


def tangent_heading(p_local: Vec2, a: float, b: float, direction: OrbitDirection) -> float:
    """Direction of travel along the concentric ellipse through ``p_local``."""
    x, y = p_local
    if direction is OrbitDirection.CCW:
        return atan2_or_zero(b * b * x, -a * a * y)
    return atan2_or_zero(-b * b * x, a * a * y)


def offset_heading(gamma: float, k_gamma: float) -> float:
    return math.atan(k_gamma * (gamma - 1.0))


def desired_heading(
    agent_local: Vec2, a: float, b: float, direction: OrbitDirection, gains: GuidanceGains
) -> FieldHeading:
    gamma = level_local(agent_local[0], agent_local[1], a, b)
    psi_T = tangent_heading(agent_local, a, b, direction)
    psi_O = offset_heading(gamma, gains.k_gamma)
    if direction is OrbitDirection.CCW:
        psi_D = wrap_angle(psi_T + psi_O)
    else:
        psi_D = wrap_angle(psi_T - psi_O)
    return FieldHeading(psi_T, psi_O, psi_D, gamma)


def heading_rate(psi_D: float, psi_E: float, k_psi: float) -> float:
    """Unsaturated proportional turn rate on the shortest-arc heading error."""
    return k_psi * wrap_angle(psi_D - psi_E)


def saturate(omega: float, omega_max: float) -> float:
    return max(-omega_max, min(omega_max, omega))


def angular_velocity_command(psi_D: float, psi_E: float, k_psi: float, omega_max: float) -> float:
    return saturate(heading_rate(psi_D, psi_E, k_psi), omega_max)


def guidance_command(
    agent_local: Vec2,
    psi_E: float,
    a: float,
    b: float,
    direction: OrbitDirection,
    gains: GuidanceGains,
    omega_max: float,
) -> HeadingCommand:
    field = desired_heading(agent_local, a, b, direction, gains)
    raw = heading_rate(field.psi_D, psi_E, gains.k_psi)
    return HeadingCommand(*field, omega_raw=raw, omega=saturate(raw, omega_max))
