import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convoy_orbit.geometry import (
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

coord = st.floats(-1e4, 1e4, allow_nan=False)
angle = st.floats(-10.0, 10.0, allow_nan=False)


def curvature_radius(a, b, s):
    return (a**2 * np.sin(s) ** 2 + b**2 * np.cos(s) ** 2) ** 1.5 / (a * b)


def area_through_corner(l1, l2, e):
    # area of the ellipse with eccentricity e through (l1/2, l2/2)
    r = np.sqrt(1.0 - e**2)
    return np.pi / 4.0 * (l1**2 * r + l2**2 / r)


class TestWrap:
    @pytest.mark.parametrize(
        "raw, wrapped",
        [(0.0, 0.0), (math.pi, math.pi), (-math.pi, math.pi), (3 * math.pi, math.pi),
         (2 * math.pi, 0.0), (-6.0, 2 * math.pi - 6.0)],
    )
    def test_known(self, raw, wrapped):
        assert wrap_angle(raw) == pytest.approx(wrapped, abs=1e-12)

    @given(angle)
    def test_range(self, a):
        w = wrap_angle(a)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
        assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-9)


class TestFrames:
    def test_identity_tilt(self):
        assert to_frame(Vec2(3, 4), FrameTilt(Vec2(0, 0), 0.0)) == (3, 4)

    def test_quarter_turn(self):
        p = to_frame(Vec2(1, 0), FrameTilt(Vec2(0, 0), math.pi / 2))
        assert p.x == pytest.approx(0.0, abs=1e-15)
        assert p.y == pytest.approx(-1.0)

    def test_inverse_quarter_turn(self):
        p = from_frame(Vec2(1, 0), FrameTilt(Vec2(0, 0), math.pi / 2))
        assert p.x == pytest.approx(0.0, abs=1e-15)
        assert p.y == pytest.approx(1.0)

    def test_local_origin_maps_to_frame_origin(self):
        f = FrameTilt(Vec2(12.5, -3.0), 2.1)
        assert from_frame(Vec2(0, 0), f) == (12.5, -3.0)

    def test_tilt_is_wrapped(self):
        assert FrameTilt(Vec2(0, 0), -math.pi).theta == math.pi

    @given(coord, coord, coord, coord, angle)
    def test_round_trip(self, px, py, ox, oy, th):
        f = FrameTilt(Vec2(ox, oy), th)
        p = from_frame(to_frame(Vec2(px, py), f), f)
        assert abs(p.x - px) <= 1e-12 * max(1.0, abs(px) + abs(ox))
        assert abs(p.y - py) <= 1e-12 * max(1.0, abs(py) + abs(oy))

    def test_round_trip_unit_scale(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            px, py, ox, oy = rng.uniform(-1, 1, 4)
            f = FrameTilt(Vec2(ox, oy), rng.uniform(-math.pi, math.pi))
            p = from_frame(to_frame(Vec2(px, py), f), f)
            assert abs(p.x - px) < 1e-12 and abs(p.y - py) < 1e-12


class TestEllipseSpec:
    @pytest.mark.parametrize("a, b", [(1.0, 2.0), (1.0, 0.0), (1.0, -1.0), (math.inf, 1.0)])
    def test_rejects_degenerate(self, a, b):
        with pytest.raises(ValueError):
            EllipseSpec(Vec2(0, 0), a, b, 0.0)

    def test_circle_allowed(self):
        assert EllipseSpec(Vec2(0, 0), 2.0, 2.0, 0.0).area() == pytest.approx(4 * math.pi)


class TestLevel:
    e = EllipseSpec(Vec2(300, 200), 250, 150, math.pi / 4)

    def test_center(self):
        assert ellipse_level(self.e.center, self.e) == 0.0

    def test_on_boundary(self):
        p = from_frame(Vec2(self.e.a, 0), self.e.frame)
        assert ellipse_level(p, self.e) == pytest.approx(1.0, rel=1e-12)

    def test_twice_major_axis(self):
        p = from_frame(Vec2(2 * self.e.a, 0), self.e.frame)
        assert ellipse_level(p, self.e) == pytest.approx(4.0, rel=1e-12)

    @given(coord, coord, angle, coord, coord, angle)
    def test_rigid_motion_invariance(self, px, py, th, tx, ty, rot):
        e = EllipseSpec(Vec2(10, -20), 40, 25, th)
        c, s = math.cos(rot), math.sin(rot)

        def move(p):
            return Vec2(c * p[0] - s * p[1] + tx, s * p[0] + c * p[1] + ty)

        moved = EllipseSpec(move(e.center), e.a, e.b, th + rot)
        g0 = ellipse_level(Vec2(px, py), e)
        g1 = ellipse_level(move(Vec2(px, py)), moved)
        assert g1 == pytest.approx(g0, rel=1e-9, abs=1e-9)


class TestMinAreaAxes:
    def test_paper_value(self):
        a, b = min_area_circumscribing_axes(2.0, 1.0)
        assert a == pytest.approx(math.sqrt(2))
        assert b == pytest.approx(1 / math.sqrt(2))

    def test_square_gives_circle(self):
        assert min_area_circumscribing_axes(2.0, 2.0) == pytest.approx((math.sqrt(2), math.sqrt(2)))

    def test_rejects_unoriented(self):
        with pytest.raises(ValueError):
            min_area_circumscribing_axes(1.0, 2.0)

    def test_collinear_rectangle(self):
        assert min_area_circumscribing_axes(3.0, 0.0) == (3 / math.sqrt(2), 0.0)

    def test_beats_eccentricity_sweep(self):
        l1, l2 = 3.0, 1.0
        a, b = min_area_circumscribing_axes(l1, l2)
        sweep = area_through_corner(l1, l2, np.linspace(0.0, 0.999, 5000))
        assert math.pi * a * b <= sweep.min() * (1 + 1e-12)
        assert sweep.min() / (math.pi * a * b) - 1 < 1e-4

    @given(st.floats(0.01, 1e3), st.floats(0.01, 0.99))
    def test_corners_on_ellipse(self, l1, ratio):
        l2 = l1 * ratio
        a, b = min_area_circumscribing_axes(l1, l2)
        for sx in (-1, 1):
            for sy in (-1, 1):
                g = (sx * l1 / 2) ** 2 / a**2 + (sy * l2 / 2) ** 2 / b**2
                assert g == pytest.approx(1.0, abs=1e-12)


class TestMinRadius:
    @pytest.mark.parametrize("a, b", [(250.0, 150.0), (350.0, 170.0), (5.0, 1.0)])
    def test_matches_sampled_curvature(self, a, b):
        s = np.linspace(0.0, 2 * np.pi, 100_000, endpoint=False)
        sampled = curvature_radius(a, b, s).min()
        assert min_radius_of_curvature(a, b) == pytest.approx(sampled, rel=1e-6)

    def test_frozen_values(self):
        assert min_radius_of_curvature(250.0, 150.0) == pytest.approx(90.0)
        assert min_radius_of_curvature(350.0, 170.0) == pytest.approx(82.571428571, rel=1e-9)

    def test_circle(self):
        assert min_radius_of_curvature(7.0, 7.0) == pytest.approx(7.0)

    def test_rejects_bad_axes(self):
        with pytest.raises(ValueError):
            min_radius_of_curvature(1.0, 2.0)


@settings(max_examples=50)
@given(st.floats(1.0, 1e3), st.floats(1.0, 5.0))
def test_curvature_never_below_minimum(b, stretch):
    a = b * stretch
    s = np.linspace(0.0, 2 * np.pi, 20_000)
    assert curvature_radius(a, b, s).min() >= b * b / a - 1e-9 * (b * b / a)
