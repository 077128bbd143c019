"""Convoy-centric line regression and the bounding rectangle around a convoy.

At the first tick the tilt comes from an ordinary least-squares fit in the
global frame. Afterwards the fit is redone in a frame centred on the convoy
mean and tilted by the previous tilt, so only a small correction angle is
estimated per tick. This keeps the tilt continuous when the convoy drives
parallel to the global y axis, where a global fit of y = m x + c breaks down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .geometry import Vec2, rotate_into, rotate_out, wrap_angle

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class ConvoySnapshot:
    """Target positions at one instant, ordered 1..N; the last entry leads."""

    positions: tuple[Vec2, ...]

    def __post_init__(self):
        pts = tuple(Vec2(float(p[0]), float(p[1])) for p in self.positions)
        if not pts:
            raise ValueError("convoy snapshot needs at least one target")
        for i, p in enumerate(pts):
            if not p.is_finite():
                raise ValueError(f"target {i + 1} has a non-finite position {p}")
        object.__setattr__(self, "positions", pts)

    @classmethod
    def of(cls, points: Sequence[Sequence[float]]) -> ConvoySnapshot:
        return cls(tuple(Vec2(p[0], p[1]) for p in points))

    def __len__(self) -> int:
        return len(self.positions)

    def mean(self) -> Vec2:
        n = len(self.positions)
        return Vec2(
            math.fsum(p.x for p in self.positions) / n,
            math.fsum(p.y for p in self.positions) / n,
        )


@dataclass(frozen=True)
class RegressionFrame:
    theta_E: float
    l1: float
    l2: float
    center: Vec2
    mean: Vec2


def project_extent(snapshot: ConvoySnapshot, mean: Vec2, theta_E: float) -> RegressionFrame:
    """Bounding rectangle of the convoy along the line through ``mean`` at ``theta_E``.

    ``l1`` spans the extreme projections onto the line, ``l2`` is twice the
    largest normal distance from the line. The returned tilt points from the
    mean toward the leader's projection, so it may differ from ``theta_E``
    by pi.
    """
    x_min = math.inf
    x_max = -math.inf
    d_max = 0.0
    x_lead = 0.0
    for p in snapshot.positions:
        x_r, y_r = rotate_into(p.x - mean.x, p.y - mean.y, theta_E)
        if abs(y_r) > d_max:
            d_max = abs(y_r)
        if x_r < x_min:
            x_min = x_r
        if x_r > x_max:
            x_max = x_r
        x_lead = x_r

    mid = 0.5 * (x_min + x_max)
    cx, cy = rotate_out(mid, 0.0, theta_E)
    center = Vec2(cx + mean.x, cy + mean.y)

    if x_lead > 0.0:
        theta_out = wrap_angle(theta_E)
    elif x_lead < 0.0:
        theta_out = wrap_angle(theta_E + math.pi)
    elif len(snapshot) == 1:
        theta_out = 0.0
    else:
        # leader projects onto the mean: keep the fitted line direction so the
        # rectangle and the ellipse stay aligned
        theta_out = wrap_angle(theta_E)

    return RegressionFrame(
        theta_E=theta_out,
        l1=x_max - x_min,
        l2=2.0 * d_max,
        center=center,
        mean=mean,
    )


def _single_target_frame(snapshot: ConvoySnapshot, theta_E: float) -> RegressionFrame:
    p = snapshot.positions[0]
    return RegressionFrame(theta_E=wrap_angle(theta_E), l1=0.0, l2=0.0, center=p, mean=p)


def init_regression(snapshot: ConvoySnapshot) -> RegressionFrame:
    """First-tick frame from a global least-squares line fit."""
    if len(snapshot) == 1:
        return _single_target_frame(snapshot, 0.0)

    mean = snapshot.mean()
    xs = [p.x for p in snapshot.positions]
    dx = [x - mean.x for x in xs]
    dy = [p.y - mean.y for p in snapshot.positions]
    m_d = math.fsum(u * u for u in dx)
    if max(xs) == min(xs) or m_d == 0.0:
        # vertical stack: slope numerator and denominator both vanish
        theta = HALF_PI
    else:
        theta = math.atan(math.fsum(u * v for u, v in zip(dx, dy)) / m_d)

    frame = project_extent(snapshot, mean, theta)
    if frame.l1 < frame.l2:
        frame = project_extent(snapshot, mean, wrap_angle(HALF_PI - frame.theta_E))
    return frame


def tilt_increment(prev_theta_E: float, snapshot: ConvoySnapshot, mean: Vec2) -> float:
    """Through-origin slope angle of the convoy seen from the previous frame."""
    num = []
    den = []
    for p in snapshot.positions:
        xb, yb = rotate_into(p.x - mean.x, p.y - mean.y, prev_theta_E)
        num.append(xb * yb)
        den.append(xb * xb)
    m_d = math.fsum(den)
    if m_d == 0.0:
        return HALF_PI
    return math.atan(math.fsum(num) / m_d)


def update_regression(prev_theta_E: float, snapshot: ConvoySnapshot) -> RegressionFrame:
    """Frame for a tick after the first, refit relative to the previous tilt."""
    if len(snapshot) == 1:
        return _single_target_frame(snapshot, prev_theta_E)
    mean = snapshot.mean()
    theta = wrap_angle(prev_theta_E + tilt_increment(prev_theta_E, snapshot, mean))
    return project_extent(snapshot, mean, theta)
