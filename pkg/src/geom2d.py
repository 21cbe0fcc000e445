"""
Planar Geometry Module
Convex polygons, hulls, perimeters, Minkowski sums and central symmetrization
"""

import math
import logging
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

logger = logging.getLogger(__name__)

# A point or direction; planar code uses length-2 tuples
Vector = Tuple[float, ...]
Point2 = Tuple[float, float]

# Duplicate / collinearity gate, relative to the instance diameter
COORD_TOL = 1e-12
# Floating-point noise of coordinates, relative to their magnitude
_ROUNDING = 4.0 * np.finfo(float).eps


class GeometryError(ValueError):
    """Raised for invalid geometric input (empty sets, zero directions, bad sizes)"""


def as_points(points: Iterable[Sequence[float]]) -> np.ndarray:
    """Convert a point collection to a finite (m, 2) float array"""
    array = np.asarray(list(points), dtype=float)
    if array.size == 0:
        raise GeometryError("empty point set")
    array = array.reshape(-1, array.shape[-1]) if array.ndim > 1 else array.reshape(1, -1)
    if array.shape[1] != 2:
        raise GeometryError(f"expected planar points, got dimension {array.shape[1]}")
    if not np.all(np.isfinite(array)):
        raise GeometryError("coordinates must be finite")
    return array


def _extent(points: np.ndarray) -> float:
    """Longest side of the bounding box; comparable to the diameter within sqrt(2)"""
    return float(np.max(np.ptp(points, axis=0)))


def _cross(o: Point2, a: Point2, b: Point2) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _canonical_hull(points: np.ndarray, noise: float = 0.0) -> Tuple[Point2, ...]:
    """
    Monotone-chain hull in canonical form

    Vertices are counter-clockwise, start at the lexicographically smallest
    vertex, and carry no collinear or near-duplicate points. Both gates scale
    with the extent of the point set; noise is the absolute coordinate error
    the points carry from the operands they were computed from.
    """
    diam = _extent(points)
    noise = max(noise, _ROUNDING * float(np.max(np.abs(points))))
    dist_tol = COORD_TOL * diam + noise
    area_tol = COORD_TOL * diam * diam + noise * diam

    ordered = sorted(set((float(x), float(y)) for x, y in points.tolist()))
    if len(ordered) == 1:
        return (ordered[0],)

    lower: List[Point2] = []
    for p in ordered:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= area_tol:
            lower.pop()
        lower.append(p)

    upper: List[Point2] = []
    for p in reversed(ordered):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= area_tol:
            upper.pop()
        upper.append(p)

    hull = lower[:-1] + upper[:-1]

    # Near-duplicates survive the chain only when they straddle the start
    cleaned: List[Point2] = []
    for p in hull:
        if cleaned and math.dist(p, cleaned[-1]) <= dist_tol:
            continue
        cleaned.append(p)
    while len(cleaned) > 1 and math.dist(cleaned[0], cleaned[-1]) <= dist_tol:
        cleaned.pop()

    start = min(range(len(cleaned)), key=lambda i: cleaned[i])
    return tuple(cleaned[start:] + cleaned[:start])


class ConvexPolygon(BaseModel):
    """
    Convex polygon in canonical counter-clockwise form

    Any vertex list is accepted on input; it is replaced by its convex hull,
    so one vertex is a singleton and two vertices are a segment.
    """

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[Point2, ...]

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data):
        if isinstance(data, dict) and "vertices" in data:
            data = dict(data)
            data["vertices"] = _canonical_hull(as_points(data["vertices"]))
        return data

    @property
    def points(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def is_singleton(self) -> bool:
        return len(self.vertices) == 1

    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2

    def edges(self) -> np.ndarray:
        """Edge vectors in boundary order; a segment has two opposite edges"""
        pts = self.points
        if len(pts) == 1:
            return np.zeros((0, 2))
        return np.roll(pts, -1, axis=0) - pts

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}


class Segment(BaseModel):
    """Closed segment [a, b]; zero length is a singleton"""

    model_config = ConfigDict(frozen=True)

    endpoint_a: Point2
    endpoint_b: Point2

    @field_validator("endpoint_a", "endpoint_b")
    @classmethod
    def _finite(cls, value: Point2) -> Point2:
        if not all(math.isfinite(c) for c in value):
            raise ValueError("segment endpoints must be finite")
        return value

    @classmethod
    def centered(cls, u: Sequence[float]) -> "Segment":
        """The 0-symmetric segment [-u, u]"""
        return cls(endpoint_a=(-float(u[0]), -float(u[1])), endpoint_b=(float(u[0]), float(u[1])))

    @property
    def length(self) -> float:
        return math.dist(self.endpoint_a, self.endpoint_b)

    @property
    def direction_angle(self) -> float:
        """Direction of b - a folded into [0, pi)"""
        dx = self.endpoint_b[0] - self.endpoint_a[0]
        dy = self.endpoint_b[1] - self.endpoint_a[1]
        return canonical_angle(dx, dy)

    def to_polygon(self) -> ConvexPolygon:
        return ConvexPolygon(vertices=[self.endpoint_a, self.endpoint_b])


def canonical_angle(x: float, y: float) -> float:
    """Angle of the line through (x, y), folded into [0, pi)"""
    angle = math.atan2(y, x)
    if angle < 0.0:
        angle += math.pi
    if angle >= math.pi:
        angle -= math.pi
    return angle


def convex_hull(points: Iterable[Sequence[float]]) -> ConvexPolygon:
    """
    Minimal counter-clockwise convex polygon containing all points

    Args:
        points: At least one finite planar point

    Returns:
        Canonical ConvexPolygon (collinear boundary points removed)

    Raises:
        GeometryError: on an empty point set
    """
    return ConvexPolygon(vertices=as_points(points))


def perimeter(P: ConvexPolygon) -> float:
    """Boundary length; 0 for a singleton, twice the length for a segment"""
    edges = P.edges()
    if len(edges) == 0:
        return 0.0
    return float(np.sum(np.hypot(edges[:, 0], edges[:, 1])))


def _bottom_index(pts: np.ndarray) -> int:
    """Index of the lowest vertex, leftmost among ties"""
    return int(np.lexsort((pts[:, 0], pts[:, 1]))[0])


def minkowski_sum(P: ConvexPolygon, Q: ConvexPolygon) -> ConvexPolygon:
    """
    Minkowski sum by merging the two edge sequences by polar angle

    Both boundaries are walked from their lowest vertex, where edge angles
    increase monotonically through [0, 2*pi). Degenerate operands contribute
    an empty (singleton) or two-edge (segment) list.
    """
    p_pts, q_pts = P.points, Q.points
    start = p_pts[_bottom_index(p_pts)] + q_pts[_bottom_index(q_pts)]

    edges = np.vstack([P.edges(), Q.edges()])
    if len(edges) == 0:
        return ConvexPolygon(vertices=[start])

    angles = np.mod(np.arctan2(edges[:, 1], edges[:, 0]), 2.0 * math.pi)
    order = np.argsort(angles, kind="stable")
    walk = start + np.cumsum(edges[order], axis=0)
    # Edge vectors inherit the rounding of the operand coordinates
    noise = len(edges) * _ROUNDING * (float(np.max(np.abs(p_pts))) + float(np.max(np.abs(q_pts))))
    return ConvexPolygon.model_construct(vertices=_canonical_hull(np.vstack([start, walk[:-1]]), noise))


def minkowski_sum_all(bodies: Sequence[ConvexPolygon]) -> ConvexPolygon:
    """Iterated Minkowski sum K^1 + ... + K^n"""
    if not bodies:
        raise GeometryError("empty body list")
    total = bodies[0]
    for body in bodies[1:]:
        total = minkowski_sum(total, body)
    return total


def translate(P: ConvexPolygon, t: Sequence[float]) -> ConvexPolygon:
    """t + P"""
    return ConvexPolygon(vertices=P.points + np.asarray(t, dtype=float))


def scale(P: ConvexPolygon, factor: float) -> ConvexPolygon:
    """Dilatation factor * P (negative factors reflect)"""
    return ConvexPolygon(vertices=P.points * float(factor))


def reflect(P: ConvexPolygon) -> ConvexPolygon:
    """-P"""
    return scale(P, -1.0)


def symmetrize(K: ConvexPolygon) -> ConvexPolygon:
    """Central symmetral (K - K) / 2, a 0-symmetric polygon"""
    return scale(minkowski_sum(K, reflect(K)), 0.5)


def regular_polygon(m: int, rho: float, phase: float = 0.0) -> ConvexPolygon:
    """
    Regular m-gon with vertices rho * (cos(2*pi*j/m + phase), sin(...))

    Args:
        m: Number of vertices (1 gives a singleton, 2 a segment)
        rho: Circumradius, non-negative
        phase: Angle of the first vertex

    Raises:
        GeometryError: if m <= 0 or rho < 0
    """
    if m <= 0:
        raise GeometryError(f"regular polygon needs m >= 1, got {m}")
    if rho < 0:
        raise GeometryError(f"circumradius must be non-negative, got {rho}")
    angles = 2.0 * math.pi * np.arange(m) / m + phase
    return ConvexPolygon(vertices=rho * np.column_stack([np.cos(angles), np.sin(angles)]))


def support(P: ConvexPolygon, direction: Sequence[float]) -> float:
    """Support function h_P(dir) = max over vertices of <v, dir>"""
    d = np.asarray(direction, dtype=float)
    if d.shape != (2,) or not np.any(d):
        raise GeometryError("support direction must be a nonzero planar vector")
    return float(np.max(P.points @ d))


def diameter_scale(P: ConvexPolygon) -> float:
    """Extent of P; relative vertex tolerances are multiplied by this"""
    return _extent(P.points)


def coordinate_noise(P: ConvexPolygon) -> float:
    """Rounding noise of a few arithmetic steps on the vertices of P"""
    return 4.0 * _ROUNDING * float(np.max(np.abs(P.points)))


def polygons_close(P: ConvexPolygon, Q: ConvexPolygon, tol: float = 1e-9) -> bool:
    """Vertex-wise equality up to a cyclic shift of the start vertex"""
    if P.vertex_count != Q.vertex_count:
        return False
    p_pts, q_pts = P.points, Q.points
    for shift in range(Q.vertex_count):
        if np.max(np.abs(p_pts - np.roll(q_pts, shift, axis=0))) <= tol:
            return True
    return False


def vertex_centroid(P: ConvexPolygon) -> np.ndarray:
    return P.points.mean(axis=0)


def is_symmetric(P: ConvexPolygon, tol: float = 1e-9) -> bool:
    """Whether P = t + (P - P)/2 for some t (the vertex centroid, if any)"""
    center = vertex_centroid(P)
    candidate = translate(symmetrize(P), center)
    return polygons_close(P, candidate, tol * diameter_scale(P) + coordinate_noise(P))
