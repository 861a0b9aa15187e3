"""Point sets on the unit sphere.

Deterministic constructions used as direction sets for sliced-Wasserstein
integration: push-forwards of cube sequences through the normalized inverse
Gaussian CDF or the Lambert cylindrical equal-area map, generalized spiral
points, and two energy-optimized families (pairwise-distance maximization,
Coulomb-energy minimization).  Randomized versions arise either by
randomizing the underlying cube set before the push-forward or by applying
a uniformly random rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cube import CubePointSet
from .errors import DegeneratePointError, BoundaryPointError, ShapeError
from .normal import inverse_normal_cdf
from .seeding import derive_seed

_UNIT_TOL = 1e-12

SPHERE_CONSTRUCTIONS = ("gaussian_map", "equal_area", "spiral", "max_distance",
                        "min_coulomb", "scaled_map_baseline", "random_uniform")

# Optimizer defaults; recorded here because the energy constructions are
# only defined up to the optimization procedure.
OPTIMIZER_ITERATIONS = 1000
OPTIMIZER_BACKTRACK = 0.5
OPTIMIZER_REL_TOL = 1e-10


def _initial_step(L: int) -> float:
    return 0.1 / np.sqrt(L)


@dataclass(frozen=True)
class SpherePointSet:
    """L unit vectors in R^d with construction provenance."""

    directions: np.ndarray
    construction: str
    randomization: str = "none"
    seed: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        dirs = np.asarray(self.directions, dtype=np.float64)
        if dirs.ndim != 2 or dirs.shape[0] < 1 or dirs.shape[1] < 2:
            raise ValueError(f"direction matrix must be (L>=1, d>=2), got {dirs.shape}")
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > _UNIT_TOL):
            worst = float(np.abs(norms - 1.0).max())
            raise ValueError(f"directions must be unit vectors within {_UNIT_TOL}, "
                             f"worst deviation {worst:.3e}")
        object.__setattr__(self, "directions", dirs)

    @property
    def count(self) -> int:
        return self.directions.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[1]


@dataclass(frozen=True)
class RotationMatrix:
    """Orthogonal d x d matrix (either determinant sign)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"rotation must be square, got shape {m.shape}")
        gram = m.T @ m
        if np.abs(gram - np.eye(m.shape[0])).max() > 1e-10:
            raise ValueError("matrix is not orthogonal within 1e-10")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _normalize_rows(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    return vectors / norms


# ---------------------------------------------------------------------------
# Push-forward mappings


def gaussian_map(cube: CubePointSet) -> SpherePointSet:
    """Normalized inverse Gaussian CDF map, theta = Phi^{-1}(x)/||Phi^{-1}(x)||.

    Requires every coordinate strictly inside (0, 1); the all-0.5 point maps
    to the zero vector and is rejected.
    """
    x = cube.points
    if np.any((x <= 0.0) | (x >= 1.0)):
        raise BoundaryPointError(
            "Gaussian map needs coordinates strictly inside (0, 1); "
            "pre-clamp or skip boundary points"
        )
    z = inverse_normal_cdf(x)
    norms = np.linalg.norm(z, axis=1)
    if np.any(norms == 0.0):
        raise DegeneratePointError(
            "point with all coordinates 0.5 maps to the zero vector"
        )
    return SpherePointSet(z / norms[:, None], construction="gaussian_map",
                          randomization=cube.randomization, seed=cube.seed)


def equal_area_map(cube: CubePointSet) -> SpherePointSet:
    """Lambert cylindrical map from [0, 1]^2 onto S^2 (area preserving)."""
    if cube.dim != 2:
        raise ShapeError(f"equal-area map needs 2-D cube points, got d={cube.dim}")
    x, y = cube.points[:, 0], cube.points[:, 1]
    r = 2.0 * np.sqrt(np.maximum(y - y * y, 0.0))
    phi = 2.0 * np.pi * x
    dirs = np.column_stack((r * np.cos(phi), r * np.sin(phi), 1.0 - 2.0 * y))
    # r^2 + (1 - 2y)^2 = 1 analytically; renormalize to absorb rounding
    return SpherePointSet(_normalize_rows(dirs), construction="equal_area",
                          randomization=cube.randomization, seed=cube.seed)


def scaled_map_baseline(cube: CubePointSet) -> SpherePointSet:
    """Naive normalization x/||x|| (high-discrepancy negative baseline)."""
    x = cube.points
    norms = np.linalg.norm(x, axis=1)
    if np.any(norms == 0.0):
        raise DegeneratePointError("cannot normalize a point at the origin")
    return SpherePointSet(x / norms[:, None], construction="scaled_map_baseline",
                          randomization=cube.randomization, seed=cube.seed)


# ---------------------------------------------------------------------------
# Explicit and sampled constructions


def spiral_points(L: int) -> SpherePointSet:
    """Generalized spiral points on S^2.

    Third coordinates walk the ladder z_i = 1 - (2i - 1)/L; the azimuth
    advances by 1.8 sqrt(L) times the polar angle, modulo 2 pi.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    i = np.arange(1, L + 1, dtype=np.float64)
    z = 1.0 - (2.0 * i - 1.0) / L
    phi1 = np.arccos(np.clip(z, -1.0, 1.0))
    phi2 = np.mod(1.8 * np.sqrt(L) * phi1, 2.0 * np.pi)
    s = np.sin(phi1)
    dirs = np.column_stack((s * np.cos(phi2), s * np.sin(phi2), np.cos(phi1)))
    return SpherePointSet(_normalize_rows(dirs), construction="spiral")


def random_uniform(L: int, d: int, seed: int) -> SpherePointSet:
    """I.i.d. uniform directions: normalized standard-normal draws."""
    if L < 1 or d < 2:
        raise ValueError("need L >= 1 and d >= 2")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((L, d))
    norms = np.linalg.norm(z, axis=1)
    while np.any(norms == 0.0):  # probability-zero guard
        bad = norms == 0.0
        z[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(z, axis=1)
    return SpherePointSet(z / norms[:, None], construction="random_uniform",
                          seed=seed)


def sample_rotation(d: int, seed: int) -> RotationMatrix:
    """Uniform draw from the orthogonal group O(d).

    Gram-Schmidt orthogonalization of a d x d standard-normal matrix with
    the positive-diagonal sign convention; the resulting distribution is
    invariant under rotation.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    current = seed
    while True:
        rng = np.random.default_rng(current)
        a = rng.standard_normal((d, d))
        q, r = np.linalg.qr(a)
        diag = np.diag(r)
        if np.all(np.abs(diag) > 1e-12):
            return RotationMatrix(q * np.sign(diag))
        current = derive_seed(current, 1)  # rank-deficient draw; resample


def rotate_pointset(points: SpherePointSet, rotation: RotationMatrix) -> SpherePointSet:
    """Apply theta' = U theta to every direction (norm/Gram preserving)."""
    if rotation.dim != points.dim:
        raise ShapeError(
            f"rotation is {rotation.dim}x{rotation.dim} but directions have d={points.dim}"
        )
    rotated = points.directions @ rotation.matrix.T
    return SpherePointSet(_normalize_rows(rotated), construction=points.construction,
                          randomization="random_rotation", seed=points.seed,
                          meta=dict(points.meta))


# ---------------------------------------------------------------------------
# Energy-optimized constructions


def _pair_distances(dirs: np.ndarray) -> np.ndarray:
    """Pairwise distance matrix via the Gram matrix (rows are unit vectors)."""
    gram = dirs @ dirs.T
    return np.sqrt(np.maximum(2.0 - 2.0 * gram, 0.0))


def _pairwise_distance_energy(dirs: np.ndarray) -> float:
    return float(_pair_distances(dirs).sum())  # ordered pairs; diagonal is zero


def _distance_gradient(dirs: np.ndarray) -> np.ndarray:
    dist = _pair_distances(dirs)
    np.fill_diagonal(dist, np.inf)
    w = 1.0 / dist
    return 2.0 * (dirs * w.sum(axis=1, keepdims=True) - w @ dirs)


def _coulomb_energy(dirs: np.ndarray) -> float:
    dist = _pair_distances(dirs)
    np.fill_diagonal(dist, np.inf)
    return float((1.0 / dist).sum())


def _coulomb_gradient(dirs: np.ndarray) -> np.ndarray:
    dist = _pair_distances(dirs)
    np.fill_diagonal(dist, np.inf)
    w3 = dist ** -3
    return -2.0 * (dirs * w3.sum(axis=1, keepdims=True) - w3 @ dirs)


def _min_pair_distance(dirs: np.ndarray) -> float:
    dist = _pair_distances(dirs)
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())


def _tangent(dirs: np.ndarray, grad: np.ndarray) -> np.ndarray:
    return grad - (grad * dirs).sum(axis=1, keepdims=True) * dirs


def _optimize_on_sphere(init: SpherePointSet, energy, gradient, sign: float,
                        iterations: int, step_size: float | None,
                        construction: str) -> SpherePointSet:
    """Projected gradient ascent (sign=+1) or descent (sign=-1) on S^2.

    Accepted steps never worsen the objective; a rejected candidate halves
    the step.  Terminates early once the relative objective change of an
    accepted step drops below OPTIMIZER_REL_TOL.
    """
    dirs = init.directions.copy()
    meta = dict(init.meta)
    if _min_pair_distance(dirs) == 0.0:
        # coincident points have an undefined gradient; jitter and renormalize
        rng = np.random.default_rng(0)
        dirs = _normalize_rows(dirs + 1e-8 * _tangent(dirs, rng.standard_normal(dirs.shape)))
        meta["jittered"] = True

    step = _initial_step(dirs.shape[0]) if step_size is None else float(step_size)
    value = energy(dirs)
    for _ in range(iterations):
        grad = _tangent(dirs, gradient(dirs))
        candidate = _normalize_rows(dirs + sign * step * grad)
        cand_value = energy(candidate)
        if sign * (cand_value - value) >= 0.0:
            improvement = abs(cand_value - value)
            dirs, value = candidate, cand_value
            if improvement <= OPTIMIZER_REL_TOL * max(abs(value), 1.0):
                break
        else:
            step *= OPTIMIZER_BACKTRACK
            if step < 1e-15:
                break
    return SpherePointSet(dirs, construction=construction, meta=meta)


def optimize_max_distance(init: SpherePointSet, iterations: int = OPTIMIZER_ITERATIONS,
                          step_size: float | None = None) -> SpherePointSet:
    """Maximize the summed pairwise distances of the configuration."""
    if init.count < 2:
        raise ValueError("distance optimization needs L >= 2")
    return _optimize_on_sphere(init, _pairwise_distance_energy, _distance_gradient,
                               +1.0, iterations, step_size, "max_distance")


def optimize_min_coulomb(init: SpherePointSet, iterations: int = OPTIMIZER_ITERATIONS,
                         step_size: float | None = None) -> SpherePointSet:
    """Minimize the Coulomb energy sum_{i != j} 1/||theta_i - theta_j||."""
    if init.count < 2:
        raise ValueError("Coulomb optimization needs L >= 2")
    return _optimize_on_sphere(init, _coulomb_energy, _coulomb_gradient,
                               -1.0, iterations, step_size, "min_coulomb")


def pairwise_distance_energy(points: SpherePointSet) -> float:
    return _pairwise_distance_energy(points.directions)


def coulomb_energy(points: SpherePointSet) -> float:
    return _coulomb_energy(points.directions)
