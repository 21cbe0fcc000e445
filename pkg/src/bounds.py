"""
Bounds Module
Closed-form values of c(d,n,k), the circumradius bound for Minkowski sums of
planar symmetric bodies, and the dimension-dependent constant obtained via
quermassintegrals
"""

import math
import logging
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from geom2d import (
    ConvexPolygon,
    GeometryError,
    Segment,
    canonical_angle,
    diameter_scale,
    is_symmetric,
    minkowski_sum_all,
    perimeter,
    symmetrize,
    vertex_centroid,
)
from circumball import BoundReport, circumradius
from zonotope import GeneratorSet, max_signed_sum_sweep, signed_sum_lower_bound

logger = logging.getLogger(__name__)

# Relative gate for "unique longest segment"; a heuristic, not a certificate
LONGEST_SEGMENT_TOL = 1e-6


class BoundError(ValueError):
    """Raised for parameters outside the range of a bound"""


class CKind(Enum):
    """How a c(d,n,k) value is known"""
    EXACT = "exact"
    LOWER = "lower"
    UPPER = "upper"
    ESTIMATE = "estimate"


class CValue(BaseModel):
    """A value of, or bound on, c(d,n,k)"""

    model_config = ConfigDict(frozen=True)

    d: int
    n: int
    k: int
    value: float
    kind: CKind

    @model_validator(mode="after")
    def _check(self) -> "CValue":
        if self.d < 1 or self.n < 1 or not 1 <= self.k <= self.n:
            raise ValueError(f"need d >= 1 and 1 <= k <= n, got d={self.d} n={self.n} k={self.k}")
        if self.kind is CKind.EXACT and not ((self.d == 2 and self.k == self.n) or self.k == 1):
            raise ValueError("exact values are known only for d=2, k=n or for k=1")
        return self

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n, "k": self.k, "value": self.value, "kind": self.kind.value}


def _inverse_sine_half(n: int) -> float:
    return 1.0 / math.sin(math.pi / (2 * n))


def c_exact_2nn(n: int) -> CValue:
    """c(2,n,n) = 1 / sin(pi / 2n)"""
    if n <= 0:
        raise BoundError(f"n must be positive, got {n}")
    return CValue(d=2, n=n, k=n, value=_inverse_sine_half(n), kind=CKind.EXACT)


def c_lower_bound(k: int, n: Optional[int] = None) -> CValue:
    """c(2,n,k) >= 1 / sin(pi / 2k) for every n >= k"""
    if k <= 0:
        raise BoundError(f"k must be positive, got {k}")
    return CValue(d=2, n=k if n is None else n, k=k, value=_inverse_sine_half(k), kind=CKind.LOWER)


def c_upper_bound(n: int, d: int = 2, k: Optional[int] = None) -> CValue:
    """c(d,n,k) <= c(2,n,n) = 1 / sin(pi / 2n)"""
    if n <= 0:
        raise BoundError(f"n must be positive, got {n}")
    return CValue(d=d, n=n, k=n if k is None else k, value=_inverse_sine_half(n), kind=CKind.UPPER)


def minkowski_constant(n: int) -> float:
    """1 / (n sin(pi / 2n)), the sharp constant for n planar symmetric bodies"""
    if n <= 0:
        raise BoundError(f"n must be positive, got {n}")
    return 1.0 / (n * math.sin(math.pi / (2 * n)))


class SymmetricBodySet(BaseModel):
    """0-symmetric bodies C^i = (K^i - K^i)/2 and their circumradii"""

    model_config = ConfigDict(frozen=True)

    bodies: Tuple[ConvexPolygon, ...]
    radii: Tuple[float, ...]

    @model_validator(mode="after")
    def _check(self) -> "SymmetricBodySet":
        if len(self.bodies) != len(self.radii):
            raise ValueError("one radius per body is required")
        for body in self.bodies:
            if not is_symmetric(body) or np.max(np.abs(vertex_centroid(body))) > 1e-9 * diameter_scale(body):
                raise ValueError("stored bodies must be 0-symmetric")
        return self

    @classmethod
    def from_bodies(cls, bodies: Sequence[ConvexPolygon]) -> "SymmetricBodySet":
        """
        Symmetrize each body on load

        A warning is logged for bodies that were not symmetric to begin with,
        since their circumradius may change.
        """
        symmetric = []
        for index, body in enumerate(bodies):
            if not is_symmetric(body):
                logger.warning("body %d is not symmetric; using (K - K)/2", index)
            symmetric.append(symmetrize(body))
        return cls(bodies=symmetric, radii=[circumradius(C).radius for C in symmetric])

    @classmethod
    def from_json(cls, data: dict) -> "SymmetricBodySet":
        return cls.from_bodies([ConvexPolygon.model_validate(b) for b in data["bodies"]])

    @property
    def n(self) -> int:
        return len(self.bodies)

    def to_json(self) -> dict:
        return {"bodies": [b.to_json() for b in self.bodies], "radii": list(self.radii)}


def regular_segment_configuration(n: int, rho: float = 1.0, phi: float = 0.0) -> SymmetricBodySet:
    """Segments [-rho*e_j, rho*e_j] with e_j at angle j*pi/n + phi, j = 1..n"""
    if n <= 0:
        raise BoundError(f"n must be positive, got {n}")
    bodies = []
    for j in range(1, n + 1):
        angle = j * math.pi / n + phi
        bodies.append(Segment.centered((rho * math.cos(angle), rho * math.sin(angle))).to_polygon())
    return SymmetricBodySet.from_bodies(bodies)


def minkowski_circumradius_check(S: SymmetricBodySet) -> BoundReport:
    """R(C^1 + ... + C^n) >= (1 / (n sin(pi / 2n))) * sum_i R(C^i)"""
    if S.n == 0:
        raise BoundError("empty body list")
    lhs = circumradius(minkowski_sum_all(S.bodies)).radius
    rhs = minkowski_constant(S.n) * sum(S.radii)
    return BoundReport.build(lhs, rhs, context=f"minkowski n={S.n}")


def farthest_points(S: SymmetricBodySet) -> GeneratorSet:
    """For each C^i a vertex u^i with ||u^i|| = R(C^i)"""
    picks = []
    for body in S.bodies:
        norms = np.hypot(body.points[:, 0], body.points[:, 1])
        picks.append(body.points[int(np.argmax(norms))])
    return GeneratorSet.from_array(picks)


def minkowski_chain_check(S: SymmetricBodySet) -> List[BoundReport]:
    """
    The two links behind the Minkowski bound

    R(sum C^i) >= max_eps ||sum eps_i u^i|| >= (1 / (n sin(pi/2n))) sum ||u^i||,
    with u^i farthest points of the C^i.
    """
    if S.n == 0:
        raise BoundError("empty body list")
    G = farthest_points(S)
    radius = circumradius(minkowski_sum_all(S.bodies)).radius
    best = max_signed_sum_sweep(G).value
    return [
        BoundReport.build(radius, best, context="R(sum C) >= max signed sum of farthest points"),
        BoundReport.build(best, signed_sum_lower_bound(G), context="max signed sum >= signed sum bound"),
    ]


def _segment_of(body: ConvexPolygon) -> Segment:
    if not body.is_segment:
        raise BoundError("condition check implemented for segment bodies only")
    return Segment(endpoint_a=body.vertices[0], endpoint_b=body.vertices[1])


def _directions_regular(segments: Sequence[Segment], tol: float) -> bool:
    n = len(segments)
    lengths = [s.length for s in segments]
    if max(lengths) == 0.0 or any(abs(length - lengths[0]) > tol * max(lengths) for length in lengths):
        return False
    angles = sorted(s.direction_angle for s in segments)
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + math.pi - angles[-1]]
    return all(abs(gap - math.pi / n) <= tol for gap in gaps)


def equality_direction_check(S: SymmetricBodySet, tol: float = 1e-9) -> bool:
    """
    Whether the segment bodies sit at angles j*pi/n + phi with equal lengths

    Raises:
        BoundError: for non-segment bodies or fewer than two bodies
    """
    if S.n < 2:
        raise BoundError("the direction condition needs at least two bodies")
    return _directions_regular([_segment_of(body) for body in S.bodies], tol)


def longest_segments(P: ConvexPolygon, rel_tol: float = LONGEST_SEGMENT_TOL) -> List[Segment]:
    """All vertex pairs realizing the diameter of P, within rel_tol"""
    if P.is_singleton:
        return [Segment(endpoint_a=P.vertices[0], endpoint_b=P.vertices[0])]
    pts = P.points
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    diameter = float(dist.max())
    rows, cols = np.nonzero(dist >= diameter * (1.0 - rel_tol))
    return [
        Segment(endpoint_a=P.vertices[i], endpoint_b=P.vertices[j])
        for i, j in zip(rows.tolist(), cols.tolist())
        if i < j
    ]


def has_unique_longest_segment(P: ConvexPolygon, rel_tol: float = LONGEST_SEGMENT_TOL) -> bool:
    return len(longest_segments(P, rel_tol)) == 1


def direction_condition_check(S: SymmetricBodySet, tol: float = 1e-9) -> bool:
    """
    Necessary equality condition for general symmetric bodies

    Each C^i must have a unique longest segment, and those segments must pass
    the direction check. Passing does not imply equality.
    """
    if S.n < 2:
        raise BoundError("the direction condition needs at least two bodies")
    segments = []
    for body in S.bodies:
        candidates = longest_segments(body)
        if len(candidates) != 1:
            return False
        segments.append(candidates[0])
    return _directions_regular(segments, tol)


@lru_cache(maxsize=None)
def ball_volume(d: int) -> float:
    """kappa_d via kappa_d = kappa_{d-2} * 2 pi / d, kappa_0 = 1, kappa_1 = 2"""
    if d < 0:
        raise BoundError(f"dimension must be non-negative, got {d}")
    if d == 0:
        return 1.0
    if d == 1:
        return 2.0
    return ball_volume(d - 2) * 2.0 * math.pi / d


def remark_constant(d: int) -> float:
    """2 kappa_{d-1} / (d kappa_d)"""
    if d < 1:
        raise BoundError(f"dimension must be positive, got {d}")
    return 2.0 * ball_volume(d - 1) / (d * ball_volume(d))


def quermassintegral_w1(P: ConvexPolygon) -> float:
    """W_1 of a planar body, normalized so that W_1(unit disc) = pi"""
    return perimeter(P) / 2.0


def quermassintegral_ball(d: int, rho: float) -> float:
    """W_{d-1} of a d-ball of radius rho"""
    return ball_volume(d) * rho


def quermassintegral_segment(d: int, rho: float) -> float:
    """W_{d-1} of a segment of half-length rho in R^d"""
    if d < 1:
        raise BoundError(f"dimension must be positive, got {d}")
    return 2.0 * ball_volume(d - 1) * rho / d


def remark_chain_check(bodies: Union[SymmetricBodySet, Sequence[ConvexPolygon]]) -> List[BoundReport]:
    """
    The planar quermassintegral chain

    Reports, in order:
      kappa_2 R(sum K) >= W_1(sum K)
      W_1(sum K) = sum W_1(K^i)
      sum W_1(K^i) >= kappa_1 * sum R(K^i)
      R(sum K) >= (2 / pi) * sum R(K^i)
    General (non-symmetric) bodies are accepted as given.
    """
    items = list(bodies.bodies) if isinstance(bodies, SymmetricBodySet) else list(bodies)
    if not items:
        raise BoundError("empty body list")

    total = minkowski_sum_all(items)
    radius_total = circumradius(total).radius
    w_total = quermassintegral_w1(total)
    w_parts = sum(quermassintegral_w1(K) for K in items)
    radii = sum(circumradius(K).radius for K in items)
    kappa_1, kappa_2 = ball_volume(1), ball_volume(2)

    return [
        BoundReport.build(kappa_2 * radius_total, w_total, context="kappa_2 R(sum K) >= W_1(sum K)"),
        BoundReport.build(w_total, w_parts, context="W_1(sum K) = sum W_1(K)"),
        BoundReport.build(w_parts, kappa_1 * radii, context="sum W_1(K) >= kappa_1 sum R(K)"),
        BoundReport.build(radius_total, remark_constant(2) * radii, context="R(sum K) >= (2/pi) sum R(K)"),
    ]


def zonoid_disc_ratio(n: int, exact: bool = True) -> float:
    """
    R(S^1 + ... + S^n) / sum R(S^i) for unit segments at angles j*pi/n

    With exact=True the ratio is measured on the configuration through the
    sweep maximizer; otherwise the closed form 1 / (n sin(pi / 2n)) is used.
    It decreases strictly to 2/pi.
    """
    if n <= 0:
        raise BoundError(f"n must be positive, got {n}")
    if not exact:
        return minkowski_constant(n)
    angles = math.pi * np.arange(1, n + 1) / n
    halves = 0.5 * np.column_stack([np.cos(angles), np.sin(angles)])
    return max_signed_sum_sweep(GeneratorSet.from_array(halves)).value / (0.5 * n)
