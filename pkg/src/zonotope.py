"""
Zonotope Module
Zonotopes sum [-u^i, u^i], their largest signed sums (angular sweep and
brute-force oracle), the lower bound in terms of sum ||u^i|| and its
equality configurations
"""

import math
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from geom2d import ConvexPolygon, GeometryError, canonical_angle
from lab_config import get_settings

logger = logging.getLogger(__name__)

_ORACLE_CHUNK = 1 << 16


class OracleError(ValueError):
    """Raised when an instance is too large for exhaustive enumeration"""


class GeneratorSet(BaseModel):
    """Generators u^1, ..., u^n of one common dimension"""

    model_config = ConfigDict(frozen=True)

    generators: Tuple[Tuple[float, ...], ...]

    @field_validator("generators")
    @classmethod
    def _check_generators(cls, value):
        if len(value) == 0:
            raise ValueError("a generator set needs at least one generator")
        dims = {len(u) for u in value}
        if len(dims) != 1 or 0 in dims:
            raise ValueError("generators must share one positive dimension")
        if not all(math.isfinite(c) for u in value for c in u):
            raise ValueError("generators must be finite")
        return value

    @classmethod
    def from_array(cls, array) -> "GeneratorSet":
        return cls(generators=[tuple(float(c) for c in row) for row in np.atleast_2d(np.asarray(array, dtype=float))])

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def dimension(self) -> int:
        return len(self.generators[0])

    @property
    def array(self) -> np.ndarray:
        return np.array(self.generators, dtype=float)

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.array, axis=1)

    def to_json(self) -> dict:
        return {"generators": [list(u) for u in self.generators]}


class SignPattern(BaseModel):
    """Signs epsilon_1, ..., epsilon_n in {-1, +1}"""

    model_config = ConfigDict(frozen=True)

    signs: Tuple[int, ...]

    @field_validator("signs")
    @classmethod
    def _plus_minus_one(cls, value):
        if any(s not in (-1, 1) for s in value):
            raise ValueError("signs must be exactly +1 or -1")
        return value


class SignedSumResult(BaseModel):
    """A maximizing sign pattern with its signed sum and norm"""

    model_config = ConfigDict(frozen=True)

    value: float
    pattern: SignPattern
    vector: Tuple[float, ...]

    @model_validator(mode="after")
    def _value_is_norm(self) -> "SignedSumResult":
        if self.value < 0 or abs(self.value - math.sqrt(sum(c * c for c in self.vector))) > 1e-12 * (1.0 + self.value):
            raise ValueError("value must be the norm of vector")
        return self

    def to_json(self) -> dict:
        return {"value": self.value, "pattern": list(self.pattern.signs), "vector": list(self.vector)}


def signed_sum(G: GeneratorSet, signs: Sequence[int]) -> np.ndarray:
    """sum_i signs[i] * u^i"""
    return np.asarray(signs, dtype=float) @ G.array


def _result(G: GeneratorSet, signs: Sequence[int]) -> SignedSumResult:
    vector = signed_sum(G, signs)
    return SignedSumResult(
        value=float(np.linalg.norm(vector)),
        pattern=SignPattern(signs=tuple(int(s) for s in signs)),
        vector=tuple(float(c) for c in vector),
    )


def _require_planar(G: GeneratorSet) -> None:
    if G.dimension != 2:
        raise GeometryError(f"planar generators required, got dimension {G.dimension}")


def zonotope_edge_walk(G: GeneratorSet) -> List[Tuple[float, float]]:
    """
    Nonzero generators oriented into [0, pi) and sorted by angle

    Starting at -(sum of the list), adding twice each entry in order and then
    subtracting twice each entry in order walks the zonotope boundary
    counter-clockwise.
    """
    _require_planar(G)
    oriented = []
    for x, y in G.generators:
        if x == 0.0 and y == 0.0:
            continue
        angle = math.atan2(y, x)
        flip = angle < 0.0 or angle >= math.pi
        oriented.append((canonical_angle(x, y), (-x, -y) if flip else (x, y)))
    oriented.sort(key=lambda item: item[0])
    return [u for _, u in oriented]


def build_zonotope(G: GeneratorSet) -> ConvexPolygon:
    """
    Zonotope sum_i [-u^i, u^i]

    Collinear generators merge into one edge direction, so the polygon has
    at most 2n vertices; all-zero generators give the singleton {0}.

    Raises:
        GeometryError: for non-planar generators
    """
    walk = zonotope_edge_walk(G)
    if not walk:
        return ConvexPolygon(vertices=[(0.0, 0.0)])

    steps = 2.0 * np.array(walk)
    start = -steps.sum(axis=0) / 2.0
    path = start + np.cumsum(np.vstack([steps, -steps]), axis=0)
    return ConvexPolygon(vertices=np.vstack([start, path[:-1]]))


def sweep_max_signs(U: np.ndarray) -> np.ndarray:
    """
    Maximizing signs for planar generators given as an (n, 2) array

    For a direction theta the best signs are sign(<u^i, theta>); they change
    only when theta crosses a normal of some generator. One direction inside
    every arc between consecutive normals is visited, flipping signs
    incrementally. Zero generators keep sign +1.
    """
    xs = [float(x) for x in U[:, 0]]
    ys = [float(y) for y in U[:, 1]]
    n = len(xs)
    nonzero = [i for i in range(n) if xs[i] != 0.0 or ys[i] != 0.0]
    if not nonzero:
        return np.ones(n, dtype=int)

    # Normals folded into [pi/2, 3pi/2); opposite directions give opposite patterns
    normals = {i: canonical_angle(xs[i], ys[i]) + math.pi / 2.0 for i in nonzero}
    order = sorted(nonzero, key=lambda i: normals[i])
    groups: List[List[int]] = []
    for i in order:
        if groups and normals[groups[-1][0]] == normals[i]:
            groups[-1].append(i)
        else:
            groups.append([i])

    first, last = normals[order[0]], normals[order[-1]]
    theta = (last + first + math.pi) / 2.0 - math.pi
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    signs = [1 if xs[i] * cos_t + ys[i] * sin_t >= 0.0 else -1 for i in range(n)]

    sx = sum(s * x for s, x in zip(signs, xs))
    sy = sum(s * y for s, y in zip(signs, ys))
    best_value = math.hypot(sx, sy)
    best_signs = list(signs)
    for group in groups:
        for i in group:
            signs[i] = -signs[i]
            sx += 2.0 * signs[i] * xs[i]
            sy += 2.0 * signs[i] * ys[i]
        value = math.hypot(sx, sy)
        if value > best_value:
            best_value = value
            best_signs = list(signs)

    return np.array(best_signs, dtype=int)


def max_signed_sum_sweep(G: GeneratorSet) -> SignedSumResult:
    """
    Exact max over all 2^n sign patterns by an angular sweep, O(n log n)

    Raises:
        GeometryError: for non-planar generators
    """
    _require_planar(G)
    return _result(G, sweep_max_signs(G.array))


def max_signed_sum_brute(G: GeneratorSet, max_n: Optional[int] = None) -> SignedSumResult:
    """
    Exact max over sign patterns by enumeration, any dimension

    epsilon_1 is fixed to +1 since ||v|| = ||-v||, leaving 2^(n-1) patterns,
    scanned in fixed-size chunks. Ties keep the first pattern in enumeration
    order, so the result does not depend on the chunk size.

    Args:
        G: Generator set
        max_n: Enumeration guard (defaults to LAB_ORACLE_MAX_N)

    Raises:
        OracleError: if n exceeds the guard
    """
    max_n = get_settings().oracle_max_n if max_n is None else max_n
    if G.n > max_n:
        raise OracleError(f"instance too large for oracle (n={G.n} > {max_n})")

    U = G.array
    rest = U[1:]
    total = 1 << (G.n - 1)
    shifts = np.arange(G.n - 1, dtype=np.int64)

    best_sq = -1.0
    best_id = 0
    for start in range(0, total, _ORACLE_CHUNK):
        ids = np.arange(start, min(total, start + _ORACLE_CHUNK), dtype=np.int64)
        signs = 1 - 2 * ((ids[:, None] >> shifts) & 1)
        sums = U[0] + signs @ rest
        sq = np.einsum("ij,ij->i", sums, sums)
        j = int(np.argmax(sq))
        if sq[j] > best_sq:
            best_sq = float(sq[j])
            best_id = int(ids[j])

    pattern = [1] + [1 - 2 * ((best_id >> b) & 1) for b in range(G.n - 1)]
    return _result(G, pattern)


def signed_sum_lower_bound(G: GeneratorSet) -> float:
    """(1 / (n sin(pi / 2n))) * sum_i ||u^i||"""
    n = G.n
    return float(np.sum(G.norms())) / (n * math.sin(math.pi / (2 * n)))


def equality_case_check(G: GeneratorSet, tol: float = 1e-9) -> bool:
    """
    Whether {+-u^1, ..., +-u^n} is the vertex set of a regular 2n-gon or {0}

    Norms are compared relative to the largest norm; the 2n points must be
    spaced by pi/n in angle, within tol radians.
    """
    _require_planar(G)
    norms = G.norms()
    largest = float(np.max(norms))
    if largest <= tol:
        return True
    if np.any(np.abs(norms - norms[0]) > tol * largest):
        return False

    angles = sorted(canonical_angle(x, y) for x, y in G.generators)
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + math.pi - angles[-1]]
    target = math.pi / G.n
    return all(abs(gap - target) <= tol for gap in gaps)


def regular_generators(n: int, length: float = 1.0, phase: float = 0.0) -> GeneratorSet:
    """n generators of equal length at angles j*pi/n + phase"""
    if n < 1:
        raise GeometryError(f"need at least one generator, got {n}")
    angles = math.pi * np.arange(n) / n + phase
    return GeneratorSet.from_array(length * np.column_stack([np.cos(angles), np.sin(angles)]))
