"""
Instances Module
Seeded random instances for the verification suites and loading of the
fixed fixtures shipped under data/fixtures
"""

import os
import json
import math
import logging
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from geom2d import ConvexPolygon, regular_polygon, symmetrize
from zonotope import GeneratorSet
from bounds import SymmetricBodySet
from lab_config import get_settings

logger = logging.getLogger(__name__)


class InstanceGenerator:
    """Random convex polygons, generator sets and symmetric body sets from one seed"""

    def __init__(self, seed: Union[int, Sequence[int]] = 0):
        """
        Initialize generator

        Args:
            seed: Seed (or seed entropy list) for numpy's default_rng; equal
                seeds give equal instances
        """
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def polygon(self, max_vertices: int = 12, radius: float = 1.0) -> ConvexPolygon:
        """
        Convex polygon with at most max_vertices vertices

        Points are drawn at random angles and radii in [radius/2, radius] around a
        random center; their hull is returned.
        """
        m = int(self.rng.integers(1, max_vertices + 1))
        angles = np.sort(self.rng.uniform(0.0, 2.0 * math.pi, size=m))
        radii = self.rng.uniform(0.5 * radius, radius, size=m)
        center = self.rng.normal(scale=radius, size=2)
        return ConvexPolygon(vertices=center + radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)]))

    def generators(self, max_n: int = 14, zero_probability: float = 0.05) -> GeneratorSet:
        """Generator set with 1 <= n <= max_n Gaussian generators, a few of them zero"""
        n = int(self.rng.integers(1, max_n + 1))
        U = self.rng.normal(size=(n, 2)) * self.rng.uniform(0.1, 3.0, size=(n, 1))
        U[self.rng.random(n) < zero_probability] = 0.0
        return GeneratorSet.from_array(U)

    def symmetric_bodies(self, max_n: int = 6, max_vertices: int = 10) -> SymmetricBodySet:
        """
        1 <= n <= max_n bodies (K - K)/2 with at most max_vertices vertices each

        The symmetral of a polygon with m vertices has up to 2m, so each K is
        drawn with at most max_vertices // 2 vertices.
        """
        n = int(self.rng.integers(1, max_n + 1))
        bodies = [symmetrize(self.polygon(max(1, max_vertices // 2))) for _ in range(n)]
        return SymmetricBodySet.from_bodies(bodies)


def dented_regular(n: int, amplitude: float = 1e-3, rho: float = 1.0) -> ConvexPolygon:
    """
    Regular n-gon (n >= 4) with its first vertex pulled toward the center by 1 - amplitude

    The circumradius stays rho while the perimeter drops by about amplitude * rho.
    """
    points = regular_polygon(n, rho).points
    points[0] *= 1.0 - amplitude
    return ConvexPolygon(vertices=points)


def fixture_path(name: str, fixture_dir: Optional[str] = None) -> str:
    directory = fixture_dir or get_settings().fixture_dir
    return os.path.join(directory, f"{name}.json")


def load_fixture(name: str, fixture_dir: Optional[str] = None) -> Dict[str, Any]:
    """
    Load one JSON fixture by name

    Args:
        name: File name without the .json suffix
        fixture_dir: Directory override (defaults to LAB_FIXTURE_DIR)

    Raises:
        FileNotFoundError: if the fixture does not exist
    """
    path = fixture_path(name, fixture_dir)
    with open(path, "r") as f:
        data = json.load(f)
    logger.debug("loaded fixture %s from %s", name, path)
    return data


def list_fixtures(fixture_dir: Optional[str] = None) -> List[str]:
    directory = fixture_dir or get_settings().fixture_dir
    if not os.path.isdir(directory):
        return []
    return sorted(f[:-5] for f in os.listdir(directory) if f.endswith(".json"))


def load_body_set(name: str, fixture_dir: Optional[str] = None) -> SymmetricBodySet:
    return SymmetricBodySet.from_json(load_fixture(name, fixture_dir))


def load_generators(name: str, fixture_dir: Optional[str] = None) -> GeneratorSet:
    return GeneratorSet.model_validate(load_fixture(name, fixture_dir))
