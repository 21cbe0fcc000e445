"""
Optimizer Module
Multi-start numerical estimation of c(d,n,k): the smallest possible value,
over n unit vectors in R^d, of the largest norm of a signed sum of k of them
"""

import math
import logging
from functools import lru_cache
from itertools import combinations
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import minimize, minimize_scalar
from tqdm import tqdm

from circumball import BoundReport
from bounds import CKind, CValue, c_lower_bound, c_upper_bound
from lab_config import get_settings
from zonotope import sweep_max_signs

logger = logging.getLogger(__name__)

SUPPORTED_DIMENSIONS = (2, 3)
UNIT_TOL = 1e-12
TIE_TOL = 1e-12
SANDWICH_TOL = 1e-6

# Coordinate search stops once every bracket is narrower than this;
# the polish step takes over from there
_MIN_BRACKET = 1e-6
_POLISH_MAX_ROWS = 4096
_EVAL_CHUNK = 1 << 16


class OptimizerError(ValueError):
    """Raised for parameters outside the optimizer's supported range"""


class OptimizerSettings(BaseModel):
    """Search budget for estimate_c"""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(default=100, ge=1)
    seed: int = 0
    max_iters: int = Field(default=40, ge=1)
    tol: float = Field(default=1e-9, gt=0)
    polish: bool = True
    show_progress: bool = False

    @classmethod
    def from_json(cls, data: dict) -> "OptimizerSettings":
        return cls.model_validate(data)


def _vectors_from_parameters(d: int, n: int, params: np.ndarray) -> np.ndarray:
    """
    Unit vectors from free parameters; the first vector is pinned to e_1

    d=2 uses one angle per vector, d=3 a (polar, azimuth) pair.
    """
    if d == 2:
        angles = np.concatenate([[0.0], params])
        return np.column_stack([np.cos(angles), np.sin(angles)])
    polar = np.concatenate([[math.pi / 2.0], params[0::2]])
    azimuth = np.concatenate([[0.0], params[1::2]])
    return np.column_stack([
        np.sin(polar) * np.cos(azimuth),
        np.sin(polar) * np.sin(azimuth),
        np.cos(polar),
    ])


def _parameter_derivatives(d: int, params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Derivative of the owning unit vector w.r.t. each parameter, and the owner index"""
    if d == 2:
        owners = np.arange(1, len(params) + 1)
        return np.column_stack([-np.sin(params), np.cos(params)]), owners

    polar, azimuth = params[0::2], params[1::2]
    d_polar = np.column_stack([np.cos(polar) * np.cos(azimuth), np.cos(polar) * np.sin(azimuth), -np.sin(polar)])
    d_azimuth = np.column_stack([-np.sin(polar) * np.sin(azimuth), np.sin(polar) * np.cos(azimuth), np.zeros_like(polar)])
    derivs = np.empty((len(params), 3))
    derivs[0::2] = d_polar
    derivs[1::2] = d_azimuth
    owners = np.repeat(np.arange(1, len(polar) + 1), 2)
    return derivs, owners


class UnitConfiguration(BaseModel):
    """n unit vectors in R^d together with the parameters that produced them"""

    model_config = ConfigDict(frozen=True)

    d: int = Field(ge=2)
    vectors: Tuple[Tuple[float, ...], ...]
    parameters: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _unit_vectors(self) -> "UnitConfiguration":
        if not self.vectors:
            raise ValueError("a configuration needs at least one vector")
        for u in self.vectors:
            if len(u) != self.d:
                raise ValueError(f"vector of dimension {len(u)} in a d={self.d} configuration")
            if abs(math.sqrt(sum(c * c for c in u)) - 1.0) > UNIT_TOL:
                raise ValueError("configuration vectors must have unit norm")
        return self

    @classmethod
    def from_parameters(cls, d: int, n: int, params) -> "UnitConfiguration":
        params = np.asarray(params, dtype=float)
        if d not in SUPPORTED_DIMENSIONS:
            raise OptimizerError(f"parameterization available for d in {SUPPORTED_DIMENSIONS}, got {d}")
        expected = (d - 1) * (n - 1)
        if params.shape != (expected,):
            raise OptimizerError(f"expected {expected} parameters for d={d}, n={n}, got {params.size}")
        U = _vectors_from_parameters(d, n, params)
        return cls(d=d, vectors=[tuple(float(c) for c in u) for u in U], parameters=tuple(float(p) for p in params))

    @classmethod
    def from_angles(cls, angles) -> "UnitConfiguration":
        """Planar configuration (cos a, sin a) without pinning"""
        angles = np.asarray(angles, dtype=float)
        return cls(d=2, vectors=[(math.cos(a), math.sin(a)) for a in angles], parameters=tuple(float(a) for a in angles))

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vectors, dtype=float)

    def to_json(self) -> dict:
        return {"d": self.d, "vectors": [list(u) for u in self.vectors], "parameters": list(self.parameters)}


def pattern_count(n: int, k: int) -> int:
    """C(n,k) * 2^(k-1): k-subsets times sign patterns with the first sign fixed"""
    return math.comb(n, k) * (1 << (k - 1))


@lru_cache(maxsize=32)
def _pattern_matrix(n: int, k: int) -> np.ndarray:
    """Rows are the signed k-subset indicator vectors, first sign of each subset +1"""
    signs = np.ones((1 << (k - 1), k), dtype=np.int8)
    ids = np.arange(1 << (k - 1))
    for b in range(k - 1):
        signs[:, b + 1] = 1 - 2 * ((ids >> b) & 1)

    per_subset = len(signs)
    matrix = np.zeros((math.comb(n, k) * per_subset, n), dtype=np.int8)
    for index, subset in enumerate(combinations(range(n), k)):
        matrix[index * per_subset:(index + 1) * per_subset, list(subset)] = signs
    matrix.setflags(write=False)
    return matrix


def _check_parameters(d: int, n: int, k: int) -> None:
    if d < 2:
        raise OptimizerError(f"dimension must be at least 2, got {d}")
    if n < 1 or not 1 <= k <= n:
        raise OptimizerError(f"need 1 <= k <= n, got n={n} k={k}")


def _uses_sweep(d: int, n: int, k: int) -> bool:
    return d == 2 and k == n


def _check_guard(d: int, n: int, k: int) -> None:
    if k == 1 or _uses_sweep(d, n, k):
        return
    limit = get_settings().enumeration_limit
    count = pattern_count(n, k)
    if count > limit:
        raise OptimizerError(
            f"C({n},{k})*2^{k - 1} = {count} sign patterns exceeds the enumeration limit {limit}; "
            "use d=2 with k=n (angular sweep) or smaller parameters"
        )


def _objective_array(U: np.ndarray, k: int) -> float:
    n, d = U.shape
    if k == 1:
        return float(np.max(np.linalg.norm(U, axis=1)))
    if _uses_sweep(d, n, k):
        signs = sweep_max_signs(U)
        return float(np.linalg.norm(signs @ U))

    matrix = _pattern_matrix(n, k)
    best = 0.0
    for start in range(0, len(matrix), _EVAL_CHUNK):
        sums = matrix[start:start + _EVAL_CHUNK] @ U
        best = max(best, float(np.max(np.einsum("ij,ij->i", sums, sums))))
    return math.sqrt(best)


def objective(C: UnitConfiguration, k: int) -> float:
    """
    max over k-subsets and signs of ||sum eps_i u^i||

    For d=2 and k=n the angular sweep is used instead of enumeration.

    Args:
        C: Unit configuration
        k: Subset size, 1 <= k <= n

    Returns:
        The exact maximum

    Raises:
        OptimizerError: for k out of range or when enumeration exceeds the guard
    """
    _check_parameters(C.d, C.n, k)
    _check_guard(C.d, C.n, k)
    return _objective_array(C.array, k)


def canonical_angles(C: UnitConfiguration) -> Tuple[float, ...]:
    """
    Planar line directions relative to the first vector, folded into [0, pi) and sorted

    Invariant under common rotations and under negating single vectors.
    """
    if C.d != 2:
        raise OptimizerError("canonical angles are defined for planar configurations")
    U = C.array
    base = math.atan2(U[0, 1], U[0, 0])
    relative = np.mod(np.arctan2(U[:, 1], U[:, 0]) - base, math.pi)
    # Values within rounding of pi denote the same line as 0
    relative[np.isclose(relative, math.pi, atol=1e-12)] = 0.0
    return tuple(float(a) for a in np.sort(relative))


def canonical_key(C: UnitConfiguration) -> Tuple[float, ...]:
    """Ordering key used to break ties between equally good configurations"""
    if C.d == 2:
        return canonical_angles(C)
    rows = []
    for u in C.array:
        nonzero = np.flatnonzero(np.abs(u) > UNIT_TOL)
        sign = 1.0 if len(nonzero) == 0 or u[nonzero[0]] > 0 else -1.0
        rows.append(tuple(float(c) for c in sign * u))
    return tuple(c for row in sorted(rows) for c in row)


class ConfigurationEstimate(BaseModel):
    """Best configuration found for c(d,n,k); best_value is an upper estimate"""

    model_config = ConfigDict(frozen=True)

    d: int
    n: int
    k: int
    best_value: float
    best_config: UnitConfiguration
    restarts_used: int
    seed: int
    converged: bool

    @model_validator(mode="after")
    def _value_matches_config(self) -> "ConfigurationEstimate":
        if self.best_config.d != self.d or self.best_config.n != self.n:
            raise ValueError("best_config does not match (d, n)")
        recomputed = objective(self.best_config, self.k)
        if abs(recomputed - self.best_value) > 1e-12 * (1.0 + abs(recomputed)):
            raise ValueError("best_value does not match the objective of best_config")
        return self

    def c_value(self) -> CValue:
        """The estimate as a CValue; it never claims to be exact"""
        return CValue(d=self.d, n=self.n, k=self.k, value=self.best_value, kind=CKind.ESTIMATE)

    def to_json(self) -> dict:
        return {
            "params": {"d": self.d, "n": self.n, "k": self.k},
            "best_value": self.best_value,
            "c_value": self.c_value().to_json(),
            "best_config": self.best_config.to_json(),
            "restarts_used": self.restarts_used,
            "seed": self.seed,
            "converged": self.converged,
        }


def _coordinate_search(
    f: Callable[[np.ndarray], float], x0: np.ndarray, settings: OptimizerSettings
) -> Tuple[np.ndarray, float]:
    """
    Coordinate-wise bounded scalar minimization with halving brackets

    Each sweep minimizes along one coordinate at a time inside [x_j - h, x_j + h];
    a sweep without improvement halves h.
    """
    x = x0.copy()
    value = f(x)
    if x.size == 0:
        return x, value

    half_width = math.pi / 4.0
    for _ in range(settings.max_iters):
        improved = False
        for j in range(x.size):
            def along(t: float, j: int = j) -> float:
                y = x.copy()
                y[j] = t
                return f(y)

            result = minimize_scalar(
                along,
                bounds=(x[j] - half_width, x[j] + half_width),
                method="bounded",
                options={"xatol": max(half_width * 1e-3, settings.tol)},
            )
            if result.fun < value - settings.tol:
                x[j] = result.x
                value = float(result.fun)
                improved = True
        if not improved:
            half_width /= 2.0
            if half_width < _MIN_BRACKET:
                break
    return x, value


def _polish(d: int, n: int, k: int, x: np.ndarray, value: float) -> Tuple[np.ndarray, float]:
    """
    SLSQP on the epigraph form: minimize t subject to t >= ||M_r U(x)||^2 for every pattern row

    Kept only when it strictly lowers the exact objective.
    """
    if x.size == 0 or k == 1 or pattern_count(n, k) > _POLISH_MAX_ROWS:
        return x, value

    matrix = _pattern_matrix(n, k).astype(float)
    size = x.size

    def constraints(z: np.ndarray) -> np.ndarray:
        sums = matrix @ _vectors_from_parameters(d, n, z[:size])
        return z[size] - np.einsum("ij,ij->i", sums, sums)

    def jacobian(z: np.ndarray) -> np.ndarray:
        params = z[:size]
        sums = matrix @ _vectors_from_parameters(d, n, params)
        derivs, owners = _parameter_derivatives(d, params)
        jac = np.empty((len(matrix), size + 1))
        jac[:, :size] = -2.0 * matrix[:, owners] * (sums @ derivs.T)
        jac[:, size] = 1.0
        return jac

    z0 = np.concatenate([x, [value * value]])
    result = minimize(
        lambda z: z[size],
        z0,
        jac=lambda z: np.concatenate([np.zeros(size), [1.0]]),
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": constraints, "jac": jacobian}],
        bounds=[(None, None)] * size + [(0.0, None)],
        options={"maxiter": 200, "ftol": 1e-15},
    )
    candidate = result.x[:size]
    if not np.all(np.isfinite(candidate)):
        return x, value
    polished = _objective_array(_vectors_from_parameters(d, n, candidate), k)
    if polished < value:
        return candidate, polished
    return x, value


def _initial_parameters(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if d == 2:
        return rng.uniform(0.0, math.pi, size=n - 1)
    params = np.empty(2 * (n - 1))
    params[0::2] = np.arccos(rng.uniform(-1.0, 1.0, size=n - 1))
    params[1::2] = rng.uniform(0.0, 2.0 * math.pi, size=n - 1)
    return params


def _fold(d: int, params: np.ndarray) -> np.ndarray:
    # Planar angles are lines: theta and theta + pi give the same objective
    return np.mod(params, math.pi) if d == 2 else params


def _better(value: float, config: UnitConfiguration, best_value: float, best_config: Optional[UnitConfiguration]) -> bool:
    if best_config is None or value < best_value - TIE_TOL:
        return True
    if value <= best_value + TIE_TOL:
        return canonical_key(config) < canonical_key(best_config)
    return False


def estimate_c(d: int, n: int, k: int, settings: Optional[OptimizerSettings] = None) -> ConfigurationEstimate:
    """
    Estimate c(d,n,k) from above by multi-start local minimization

    Restart r starts from uniformly random parameters drawn from the r-th
    child of SeedSequence(settings.seed), so results do not depend on how
    restarts are scheduled. The estimate counts as converged when the best
    value improved by no more than 1e-9 during the final 20% of restarts.

    Args:
        d: Dimension, 2 or 3
        n: Number of unit vectors
        k: Subset size, 1 <= k <= n
        settings: Search budget (defaults to OptimizerSettings())

    Returns:
        ConfigurationEstimate with the best configuration found

    Raises:
        OptimizerError: for unsupported dimensions, invalid (n, k) or parameters beyond the guard
    """
    settings = settings or OptimizerSettings()
    if d not in SUPPORTED_DIMENSIONS:
        raise OptimizerError(f"estimate_c supports d in {SUPPORTED_DIMENSIONS}, got {d}")
    _check_parameters(d, n, k)
    _check_guard(d, n, k)

    def f(params: np.ndarray) -> float:
        return _objective_array(_vectors_from_parameters(d, n, params), k)

    children = np.random.SeedSequence(settings.seed).spawn(settings.restarts)
    best_value = math.inf
    best_config: Optional[UnitConfiguration] = None
    history: List[float] = []

    for child in tqdm(children, desc=f"c({d},{n},{k})", disable=not settings.show_progress):
        rng = np.random.default_rng(child)
        x = _initial_parameters(d, n, rng)
        # Every configuration is optimal for k = 1
        if k > 1:
            x, value = _coordinate_search(f, x, settings)
        if k > 1 and settings.polish:
            x, value = _polish(d, n, k, x, value)

        config = UnitConfiguration.from_parameters(d, n, _fold(d, x))
        value = objective(config, k)
        if _better(value, config, best_value, best_config):
            best_value, best_config = value, config
        history.append(best_value)

    window = max(1, math.ceil(0.2 * settings.restarts))
    before = history[-window - 1] if len(history) > window else math.inf
    converged = before - best_value <= 1e-9

    logger.info(
        "c(%d,%d,%d) estimate %.12g after %d restarts (converged=%s)",
        d, n, k, best_value, settings.restarts, converged,
    )
    return ConfigurationEstimate(
        d=d,
        n=n,
        k=k,
        best_value=best_value,
        best_config=best_config,
        restarts_used=settings.restarts,
        seed=settings.seed,
        converged=converged,
    )


def lower_sandwich_value(d: int, k: int) -> float:
    """
    Known lower bound on c(d,n,k)

    1 / sin(pi / 2k) in the plane; in higher dimensions only sqrt(k), since the
    average of ||sum eps_i u^i||^2 over all signs is k.
    """
    if d == 2:
        return c_lower_bound(k).value
    return math.sqrt(k)


def sandwich_check(E: ConfigurationEstimate) -> BoundReport:
    """best_value >= lower bound on c(d,n,k)"""
    return BoundReport.build(
        E.best_value,
        lower_sandwich_value(E.d, E.k),
        context=f"c({E.d},{E.n},{E.k}) estimate >= lower bound",
    )


def upper_check(E: ConfigurationEstimate) -> BoundReport:
    """1 / sin(pi / 2n) >= best_value"""
    return BoundReport.build(
        c_upper_bound(E.n, d=E.d, k=E.k).value,
        E.best_value,
        context=f"1/sin(pi/2n) >= c({E.d},{E.n},{E.k}) estimate",
    )


def sandwich_reports(E: ConfigurationEstimate) -> List[BoundReport]:
    return [sandwich_check(E), upper_check(E)]


def sandwich_ok(E: ConfigurationEstimate, tol: float = SANDWICH_TOL) -> bool:
    """lower - tol <= best_value <= upper + tol"""
    lower, upper = sandwich_reports(E)
    return lower.slack >= -tol and upper.slack >= -tol


if __name__ == "__main__":
    # Example usage
    for n in range(1, 6):
        estimate = estimate_c(2, n, n, OptimizerSettings(restarts=20, seed=0))
        print(f"c(2,{n},{n}) ~ {estimate.best_value:.9f}   exact {1.0 / math.sin(math.pi / (2 * n)):.9f}")
