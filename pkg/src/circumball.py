"""
Circumball Module
Minimal enclosing circles, circumradii of polygons and the Dowker-type
circumradius/perimeter inequality with its equality cases
"""

import math
import random
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from geom2d import ConvexPolygon, GeometryError, Point2, as_points, perimeter
from lab_config import get_settings

logger = logging.getLogger(__name__)

# Fixed shuffle seed: the solver is randomized but reproducible
_SHUFFLE_SEED = 0x5EED
_MULTIPLICATIVE_EPSILON = 1 + 1e-14


class Circle(BaseModel):
    """Circle with center t and radius rho, plus the points that pin it"""

    model_config = ConfigDict(frozen=True)

    center: Point2
    radius: float = Field(ge=0)
    support: Tuple[Point2, ...] = ()

    @field_validator("center")
    @classmethod
    def _finite_center(cls, value: Point2) -> Point2:
        if not all(math.isfinite(c) for c in value):
            raise ValueError("circle center must be finite")
        return value

    def contains(self, point: Sequence[float], tol: float = 1e-9) -> bool:
        return math.dist(self.center, point) <= self.radius + tol * (1.0 + self.radius)


class BoundReport(BaseModel):
    """One verified inequality instance lhs >= rhs"""

    model_config = ConfigDict(frozen=True)

    lhs: float
    rhs: float
    slack: float
    equality: bool
    context: str = ""

    @model_validator(mode="after")
    def _slack_matches(self) -> "BoundReport":
        if self.slack != self.lhs - self.rhs:
            raise ValueError("slack must equal lhs - rhs")
        return self

    @classmethod
    def build(cls, lhs: float, rhs: float, context: str = "", tol: Optional[float] = None) -> "BoundReport":
        """
        Compute slack and the equality verdict

        Args:
            lhs: Left side of the inequality
            rhs: Right side of the inequality
            context: Label identifying the instance
            tol: Relative tolerance (defaults to LAB_TOLERANCE)
        """
        tol = get_settings().tolerance if tol is None else tol
        lhs, rhs = float(lhs), float(rhs)
        slack = lhs - rhs
        scale = 1.0 + abs(lhs) + abs(rhs)
        return cls(lhs=lhs, rhs=rhs, slack=slack, equality=abs(slack) <= tol * scale, context=context)

    @property
    def scale(self) -> float:
        return 1.0 + abs(self.lhs) + abs(self.rhs)

    def holds(self, tol: Optional[float] = None) -> bool:
        """Whether lhs >= rhs up to tol * scale"""
        tol = get_settings().tolerance if tol is None else tol
        return self.slack >= -tol * self.scale

    def to_json(self) -> dict:
        return self.model_dump(include={"lhs", "rhs", "slack", "equality", "context"})


# Internal circle representation: (cx, cy, r, support points)
_Disc = Tuple[float, float, float, Tuple[Point2, ...]]


def _inside(c: _Disc, p: Point2) -> bool:
    return math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * _MULTIPLICATIVE_EPSILON


def _cross(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _diameter_disc(a: Point2, b: Point2) -> _Disc:
    cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
    r = max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1]))
    return (cx, cy, r, (a, b))


def _circum_disc(a: Point2, b: Point2, c: Point2) -> Optional[_Disc]:
    """Circumcircle of a triangle, computed relative to its bounding-box center"""
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2.0
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2.0
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(math.hypot(x - p[0], y - p[1]) for p in (a, b, c))
    return (x, y, r, (a, b, c))


def _disc_with_two(points: List[Point2], p: Point2, q: Point2) -> _Disc:
    """Smallest disc over points with p and q on the boundary"""
    circ = _diameter_disc(p, q)
    left: Optional[_Disc] = None
    right: Optional[_Disc] = None
    px, py = p
    qx, qy = q

    for r in points:
        if _inside(circ, r):
            continue
        cross = _cross(px, py, qx, qy, r[0], r[1])
        c = _circum_disc(p, q, r)
        if c is None:
            continue
        if cross > 0.0 and (left is None or _cross(px, py, qx, qy, c[0], c[1]) > _cross(px, py, qx, qy, left[0], left[1])):
            left = c
        elif cross < 0.0 and (right is None or _cross(px, py, qx, qy, c[0], c[1]) < _cross(px, py, qx, qy, right[0], right[1])):
            right = c

    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _disc_with_one(points: List[Point2], p: Point2) -> _Disc:
    """Smallest disc over points with p on the boundary"""
    c: _Disc = (p[0], p[1], 0.0, (p,))
    for i, q in enumerate(points):
        if not _inside(c, q):
            if c[2] == 0.0:
                c = _diameter_disc(p, q)
            else:
                c = _disc_with_two(points[: i + 1], p, q)
    return c


def min_enclosing_circle(points: Iterable[Sequence[float]]) -> Circle:
    """
    Smallest circle containing every point (Welzl, incremental form)

    The input is sorted and shuffled with a fixed seed, so the result does not
    depend on the input order.

    Args:
        points: Non-empty finite planar point set

    Returns:
        Circle with its 1-3 support points

    Raises:
        GeometryError: on an empty point set
    """
    pts = as_points(points)
    ordered: List[Point2] = sorted(set((float(x), float(y)) for x, y in pts.tolist()))
    random.Random(_SHUFFLE_SEED).shuffle(ordered)

    c: Optional[_Disc] = None
    for i, p in enumerate(ordered):
        if c is None or not _inside(c, p):
            c = _disc_with_one(ordered[: i + 1], p)

    return Circle(center=(c[0], c[1]), radius=c[2], support=tuple(sorted(c[3])))


def circumradius(P: ConvexPolygon) -> Circle:
    """Circumball of P; it is the minimal enclosing circle of the vertices"""
    return min_enclosing_circle(P.vertices)


def central_angles(P: ConvexPolygon, circle: Optional[Circle] = None) -> Tuple[float, ...]:
    """
    Angles between consecutive vertices as seen from the circumcenter

    They sum to 2*pi whenever P has more than one vertex.
    """
    if P.is_singleton:
        return ()
    circle = circle or circumradius(P)
    rel = P.points - np.asarray(circle.center)
    theta = np.arctan2(rel[:, 1], rel[:, 0])
    gaps = np.mod(np.roll(theta, -1) - theta, 2.0 * math.pi)
    return tuple(float(g) for g in gaps)


def project_to_circumcircle(P: ConvexPolygon) -> ConvexPolygon:
    """
    Radial projection of the vertices of P onto its circumcircle

    The result has the same circumradius and a perimeter at least per(P).
    """
    if P.is_singleton:
        return P
    circle = circumradius(P)
    center = np.asarray(circle.center)
    rel = P.points - center
    norms = np.hypot(rel[:, 0], rel[:, 1])[:, None]
    return ConvexPolygon(vertices=center + circle.radius * rel / norms)


def is_regular_ngon(P: ConvexPolygon, n: int, tol: float = 1e-6) -> bool:
    """
    Whether P is a regular n-gon

    Radial distances are compared relative to R(P), central angles in radians.
    A singleton counts as the regular 1-gon and a segment as the regular 2-gon.
    """
    if n < 1 or P.vertex_count != n:
        return False
    if n == 1:
        return True

    circle = circumradius(P)
    if circle.radius == 0.0:
        return False

    rel = P.points - np.asarray(circle.center)
    radial = np.hypot(rel[:, 0], rel[:, 1])
    if np.any(np.abs(radial - circle.radius) > tol * circle.radius):
        return False

    target = 2.0 * math.pi / n
    return all(abs(alpha - target) <= tol for alpha in central_angles(P, circle))


def dowker_check(P: ConvexPolygon, n: int) -> BoundReport:
    """
    Check 2 n sin(pi/n) R(P) >= per(P) for an m-gon P with m <= n

    The equality verdict requires both a tight slack and a structural
    certificate: P is a singleton or a regular n-gon.

    Raises:
        GeometryError: if n < 1 or P has more than n vertices
    """
    if n < 1:
        raise GeometryError(f"n must be positive, got {n}")
    if P.vertex_count > n:
        raise GeometryError(f"vertex count exceeds n ({P.vertex_count} > {n})")

    radius = circumradius(P).radius
    lhs = 2.0 * n * math.sin(math.pi / n) * radius
    report = BoundReport.build(lhs, perimeter(P), context=f"dowker m={P.vertex_count} n={n}")

    if report.equality and not (P.is_singleton or is_regular_ngon(P, n)):
        logger.warning("Dowker bound numerically tight for a non-regular %d-gon (n=%d)", P.vertex_count, n)
        report = report.model_copy(update={"equality": False})
    return report
