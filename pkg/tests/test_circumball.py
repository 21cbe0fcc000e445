"""
Unit Tests for minimal enclosing circles and the circumradius/perimeter bound
"""

import math
import sys
import os
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from geom2d import ConvexPolygon, GeometryError, convex_hull, minkowski_sum, perimeter, regular_polygon, symmetrize, translate
from circumball import (
    BoundReport,
    Circle,
    central_angles,
    circumradius,
    dowker_check,
    is_regular_ngon,
    min_enclosing_circle,
    project_to_circumcircle,
)
from instances import InstanceGenerator, dented_regular


coordinate = st.integers(-1000, 1000).map(lambda v: v / 100.0)
point_lists = st.lists(st.tuples(coordinate, coordinate), min_size=1, max_size=10)


def brute_force_radius(points):
    """Smallest circle through 2 or 3 of the points that contains them all"""
    pts = [tuple(map(float, p)) for p in points]
    if len(set(pts)) == 1:
        return 0.0
    best = math.inf
    candidates = []
    for a, b in combinations(pts, 2):
        candidates.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
    for a, b, c in combinations(pts, 3):
        d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
        if abs(d) < 1e-12:
            continue
        ux = ((a[0] ** 2 + a[1] ** 2) * (b[1] - c[1]) + (b[0] ** 2 + b[1] ** 2) * (c[1] - a[1]) + (c[0] ** 2 + c[1] ** 2) * (a[1] - b[1])) / d
        uy = ((a[0] ** 2 + a[1] ** 2) * (c[0] - b[0]) + (b[0] ** 2 + b[1] ** 2) * (a[0] - c[0]) + (c[0] ** 2 + c[1] ** 2) * (b[0] - a[0])) / d
        candidates.append((ux, uy))
    for center in candidates:
        radius = max(math.dist(center, p) for p in pts)
        best = min(best, radius)
    return best


class TestMinEnclosingCircle:
    """Welzl-type minimal enclosing circle"""

    def test_single_point(self):
        circle = min_enclosing_circle([(0.0, 0.0)])
        assert circle.radius == 0.0
        assert circle.center == (0.0, 0.0)

    def test_equilateral_triangle(self):
        circle = min_enclosing_circle(regular_polygon(3, 1.0, 0.0).vertices)
        assert circle.radius == pytest.approx(1.0, abs=1e-12)
        assert circle.center == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_obtuse_triangle_uses_diameter(self):
        circle = min_enclosing_circle([(0, 0), (4, 0), (1, 1)])
        assert circle.center == pytest.approx((2.0, 0.0), abs=1e-12)
        assert circle.radius == pytest.approx(2.0, abs=1e-12)
        assert len(circle.support) == 2

    def test_empty_raises(self):
        with pytest.raises(GeometryError):
            min_enclosing_circle([])

    @settings(max_examples=200)
    @given(point_lists)
    def test_matches_brute_force(self, points):
        circle = min_enclosing_circle(points)
        assert circle.radius == pytest.approx(brute_force_radius(points), abs=1e-9)
        assert all(circle.contains(p) for p in points)

    def test_independent_of_input_order(self):
        rng = np.random.default_rng(11)
        points = rng.normal(size=(40, 2))
        reference = min_enclosing_circle(points)
        for _ in range(5):
            shuffled = points[rng.permutation(len(points))]
            assert min_enclosing_circle(shuffled) == reference

    def test_circle_validation(self):
        with pytest.raises(ValidationError):
            Circle(center=(0.0, 0.0), radius=-1.0)


class TestCircumradius:
    """Circumradius of polygons"""

    def test_square(self):
        circle = circumradius(ConvexPolygon(vertices=[(1, 1), (-1, 1), (-1, -1), (1, -1)]))
        assert circle.radius == pytest.approx(math.sqrt(2.0), abs=1e-12)
        assert circle.center == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_left_octagon(self):
        A = ConvexPolygon(vertices=[(1, 0), (0, 0.25), (-1, 0), (0, -0.25)])
        B = ConvexPolygon(vertices=[(0, 1), (-0.25, 0), (0, -1), (0.25, 0)])
        assert circumradius(minkowski_sum(A, B)).radius == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_right_octagon(self):
        octagon = ConvexPolygon(vertices=[(1.5, 0), (1, 1), (0, 1.5), (-1, 1), (-1.5, 0), (-1, -1), (0, -1.5), (1, -1)])
        assert circumradius(octagon).radius == pytest.approx(1.5, abs=1e-12)

    def test_symmetric_body_centered_at_origin(self):
        gen = InstanceGenerator(5)
        for _ in range(50):
            C = symmetrize(gen.polygon(8))
            center = circumradius(C).center
            assert max(abs(center[0]), abs(center[1])) <= 1e-9


class TestCentralAngles:
    """Central angles and radial projection"""

    def test_angles_sum_to_two_pi(self):
        gen = InstanceGenerator(6)
        for _ in range(50):
            P = gen.polygon(12)
            if P.vertex_count < 2:
                continue
            assert sum(central_angles(P)) == pytest.approx(2.0 * math.pi, abs=1e-9)

    def test_regular_angles_equal(self):
        angles = central_angles(regular_polygon(7, 2.0, 0.4))
        assert all(a == pytest.approx(2.0 * math.pi / 7, abs=1e-12) for a in angles)

    def test_projection_keeps_radius_and_grows_perimeter(self):
        gen = InstanceGenerator(7)
        for _ in range(50):
            P = gen.polygon(10)
            projected = project_to_circumcircle(P)
            assert circumradius(projected).radius == pytest.approx(circumradius(P).radius, abs=1e-9)
            assert perimeter(projected) >= perimeter(P) - 1e-9

    def test_singleton_projection(self):
        P = ConvexPolygon(vertices=[(2, 3)])
        assert project_to_circumcircle(P) == P
        assert central_angles(P) == ()


class TestDowkerCheck:
    """2 n sin(pi/n) R(P) >= per(P) for m-gons with m <= n"""

    @pytest.mark.parametrize("n", range(1, 13))
    def test_regular_polygons_attain_equality(self, n):
        report = dowker_check(regular_polygon(n, 1.7, 0.3), n)
        assert report.equality
        assert abs(report.slack) <= 1e-9 * report.scale

    @pytest.mark.parametrize("rho, offset", [(1e-5, (10.0, 10.0)), (1e-6, (0.0, 0.0)), (3e-4, (-50.0, 7.0))])
    def test_small_and_translated_regular_polygons(self, rho, offset):
        for n in (6, 12):
            P = translate(regular_polygon(n, rho, 0.1), offset)
            assert P.vertex_count == n
            assert is_regular_ngon(P, n)
            assert dowker_check(P, n).equality

    def test_singleton_equality(self):
        report = dowker_check(ConvexPolygon(vertices=[(1, 2)]), 5)
        assert report.equality

    def test_dented_hexagon_is_strict(self):
        report = dowker_check(dented_regular(6, 1e-3), 6)
        assert not report.equality
        assert report.slack >= 1e-7

    def test_regular_triangle_counted_as_hexagon_is_strict(self):
        report = dowker_check(regular_polygon(3, 1.0), 6)
        assert report.slack == pytest.approx(6.0 - 3.0 * math.sqrt(3.0), abs=1e-12)
        assert not report.equality

    def test_random_polygons_satisfy_bound(self):
        gen = InstanceGenerator(8)
        for _ in range(1000):
            P = gen.polygon(12)
            n = int(gen.rng.integers(P.vertex_count, 13))
            report = dowker_check(P, n)
            assert report.holds()
            assert report.slack >= -1e-9 * report.scale

    def test_too_many_vertices_raises(self):
        with pytest.raises(GeometryError):
            dowker_check(regular_polygon(6, 1.0), 5)

    def test_non_positive_n_raises(self):
        with pytest.raises(GeometryError):
            dowker_check(ConvexPolygon(vertices=[(0, 0)]), 0)

    def test_is_regular_ngon(self):
        assert is_regular_ngon(regular_polygon(5, 1.0, 0.2), 5)
        assert not is_regular_ngon(regular_polygon(5, 1.0), 6)
        assert not is_regular_ngon(dented_regular(6, 1e-3), 6)
        assert is_regular_ngon(convex_hull([(-1, 0), (1, 0)]), 2)


class TestBoundReport:
    """Inequality report carrier"""

    def test_build_computes_slack(self):
        report = BoundReport.build(3.0, 1.0, context="x")
        assert report.slack == 2.0
        assert not report.equality
        assert report.holds()

    def test_equality_within_tolerance(self):
        assert BoundReport.build(1.0 + 1e-12, 1.0).equality

    def test_violation_detected(self):
        assert not BoundReport.build(1.0, 1.1).holds()

    def test_slack_must_match(self):
        with pytest.raises(ValidationError):
            BoundReport(lhs=1.0, rhs=0.5, slack=0.4, equality=False)

    def test_to_json(self):
        data = BoundReport.build(2.0, 1.0, context="c").to_json()
        assert data == {"lhs": 2.0, "rhs": 1.0, "slack": 1.0, "equality": False, "context": "c"}
