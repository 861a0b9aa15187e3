"""Sliced-Wasserstein estimators.

Three estimator families over a shared kernel (project both clouds along L
directions, take the closed-form 1-D Wasserstein per direction, average):

* ``mc``               -- i.i.d. uniform directions (stochastic),
* ``qsw``              -- a deterministic sphere point set,
* ``rqsw_pushforward`` -- randomize the cube set behind the Gaussian or
                          equal-area map (scramble or shift), then push
                          forward (stochastic, unbiased),
* ``rqsw_rotation``    -- apply one uniform random rotation to a
                          deterministic sphere point set (stochastic,
                          unbiased).

Also provides the transport-based gradient with respect to support points
and CLT/bootstrap confidence intervals from independent replicates.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import cache, cube, ot1d, sphere
from .clouds import PointCloud
from .errors import (
    ConfigError,
    DimensionUnsupportedError,
    InvalidSchemeError,
    ShapeError,
    UnsupportedRegimeError,
)
from .normal import inverse_normal_cdf
from .seeding import derive_seed

QSW_CONSTRUCTIONS = ("gaussian_map", "equal_area", "spiral", "max_distance",
                     "min_coulomb")
PUSHFORWARD_CONSTRUCTIONS = ("gaussian_map", "equal_area")
PUSHFORWARD_RANDOMIZATIONS = ("scramble", "shift")
_D3_ONLY = ("equal_area", "spiral", "max_distance", "min_coulomb")

_CHUNK_ELEMENTS = 4_000_000
_CUBE_TINY = 2.0 ** -33


@dataclass(frozen=True)
class EstimatorSpec:
    """Configuration of one sliced-Wasserstein estimator.

    ``scheme`` is one of mc / qsw / rqsw_pushforward / rqsw_rotation;
    stochastic schemes require a seed, qsw requires none.
    """

    scheme: str
    n_projections: int
    order: float = 2.0
    construction: str | None = None
    randomization: str | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.n_projections < 1:
            raise ConfigError(f"n_projections must be >= 1, got {self.n_projections}")
        if self.order < 1:
            raise ConfigError(f"order must be >= 1, got {self.order}")
        if self.scheme == "mc":
            if self.construction is not None or self.randomization is not None:
                raise ConfigError("mc takes no construction/randomization")
        elif self.scheme == "qsw":
            if self.construction not in QSW_CONSTRUCTIONS:
                raise ConfigError(
                    f"qsw construction must be one of {QSW_CONSTRUCTIONS}, "
                    f"got {self.construction!r}"
                )
            if self.randomization is not None:
                raise ConfigError("qsw is deterministic; no randomization")
        elif self.scheme == "rqsw_pushforward":
            if self.construction not in PUSHFORWARD_CONSTRUCTIONS:
                raise ConfigError(
                    f"push-forward randomization needs construction in "
                    f"{PUSHFORWARD_CONSTRUCTIONS}, got {self.construction!r}"
                )
            if self.randomization not in PUSHFORWARD_RANDOMIZATIONS:
                raise ConfigError(
                    f"push-forward randomization must be one of "
                    f"{PUSHFORWARD_RANDOMIZATIONS}, got {self.randomization!r}"
                )
        elif self.scheme == "rqsw_rotation":
            if self.construction not in QSW_CONSTRUCTIONS:
                raise ConfigError(
                    f"rotation randomization needs construction in "
                    f"{QSW_CONSTRUCTIONS}, got {self.construction!r}"
                )
            if self.randomization is not None:
                raise ConfigError("rqsw_rotation fixes its randomization")
        else:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.is_stochastic and self.seed is None:
            raise ConfigError(f"scheme {self.scheme!r} requires a seed")

    @property
    def is_stochastic(self) -> bool:
        return self.scheme != "qsw"

    def with_seed(self, seed: int) -> "EstimatorSpec":
        return dataclasses.replace(self, seed=seed)


# Named variants: g/e/s/d/c pick the construction (Gaussian map, equal-area,
# spiral, max-distance, min-Coulomb); a leading r adds randomization, with
# rr*, rs*, rd*, rc* rotating a deterministic set and rg*/re* scrambling the
# cube set behind the push-forward map.
_VARIANTS = {
    "mc": ("mc", None, None),
    "gqsw": ("qsw", "gaussian_map", None),
    "eqsw": ("qsw", "equal_area", None),
    "sqsw": ("qsw", "spiral", None),
    "dqsw": ("qsw", "max_distance", None),
    "cqsw": ("qsw", "min_coulomb", None),
    "rgqsw": ("rqsw_pushforward", "gaussian_map", "scramble"),
    "reqsw": ("rqsw_pushforward", "equal_area", "scramble"),
    "rgqsw_shift": ("rqsw_pushforward", "gaussian_map", "shift"),
    "reqsw_shift": ("rqsw_pushforward", "equal_area", "shift"),
    "rrgqsw": ("rqsw_rotation", "gaussian_map", None),
    "rreqsw": ("rqsw_rotation", "equal_area", None),
    "rsqsw": ("rqsw_rotation", "spiral", None),
    "rdqsw": ("rqsw_rotation", "max_distance", None),
    "rcqsw": ("rqsw_rotation", "min_coulomb", None),
}

SCHEME_NAMES = tuple(_VARIANTS)


def spec_from_name(name: str, n_projections: int, order: float = 2.0,
                   seed: int | None = None) -> EstimatorSpec:
    """Build an EstimatorSpec from a variant name such as 'mc' or 'rcqsw'."""
    key = name.lower().replace("-", "_")
    if key not in _VARIANTS:
        raise ConfigError(f"unknown scheme name {name!r}; expected one of "
                          f"{sorted(_VARIANTS)}")
    scheme, construction, randomization = _VARIANTS[key]
    return EstimatorSpec(scheme=scheme, n_projections=n_projections, order=order,
                         construction=construction, randomization=randomization,
                         seed=seed)


# ---------------------------------------------------------------------------
# Direction-set resolution

_BASE_SET_CACHE: dict = {}


def _gaussian_base_cube(L: int, d: int) -> cube.CubePointSet:
    """Digital cube points valid for the Gaussian map.

    Walks the sequence from index 1 and keeps rows strictly inside (0, 1)
    that do not collapse to the zero vector (index 1 is the all-0.5 point,
    which does); the first L valid rows form the base set.
    """
    collected = []
    have = 0
    offset = 1
    block = max(L + 1, 16)
    while have < L:
        pts = cube.sobol_generate(d, block, offset=offset).points
        interior = np.all((pts > 0.0) & (pts < 1.0), axis=1)
        nondegenerate = ~np.all(pts == 0.5, axis=1)
        keep = pts[interior & nondegenerate]
        collected.append(keep)
        have += keep.shape[0]
        offset += block
    points = np.concatenate(collected, axis=0)[:L]
    return cube.CubePointSet(points, generator="sobol")


def _equal_area_base_cube(L: int) -> cube.CubePointSet:
    return cube.sobol_generate(2, L, offset=1)


def _deterministic_directions(construction: str, L: int, d: int) -> sphere.SpherePointSet:
    if construction in _D3_ONLY and d != 3:
        raise DimensionUnsupportedError(
            f"construction '{construction}' is defined on S^2 only (d=3), got d={d}"
        )
    key = (construction, L, d)
    hit = _BASE_SET_CACHE.get(key)
    if hit is not None:
        return hit
    if construction == "gaussian_map":
        result = sphere.gaussian_map(_gaussian_base_cube(L, d))
    elif construction == "equal_area":
        result = sphere.equal_area_map(_equal_area_base_cube(L))
    elif construction == "spiral":
        result = sphere.spiral_points(L)
    elif construction in ("max_distance", "min_coulomb"):
        result = cache.load_optimized(construction, L)
    else:
        raise ConfigError(f"unknown construction {construction!r}")
    _BASE_SET_CACHE[key] = result
    return result


def _prepare_for_gaussian(points: np.ndarray) -> np.ndarray:
    """Clamp randomized cube points into the open cube; nudge a (measure-zero)
    all-0.5 row off the degenerate center."""
    out = np.clip(points, _CUBE_TINY, 1.0 - _CUBE_TINY)
    degenerate = np.all(out == 0.5, axis=1)
    if np.any(degenerate):
        out[degenerate, 0] += _CUBE_TINY
    return out


def resolve_directions(spec: EstimatorSpec, d: int) -> sphere.SpherePointSet:
    """Materialize the direction set an estimator spec describes."""
    L = spec.n_projections
    if spec.scheme == "mc":
        return sphere.random_uniform(L, d, spec.seed)
    if spec.scheme == "qsw":
        return _deterministic_directions(spec.construction, L, d)
    if spec.scheme == "rqsw_pushforward":
        if spec.construction == "gaussian_map":
            base = _gaussian_base_cube(L, d)
        else:
            if d != 3:
                raise DimensionUnsupportedError("equal-area push-forward needs d=3")
            base = _equal_area_base_cube(L)
        if spec.randomization == "scramble":
            randomized = cube.scramble_randomize(base, spec.seed)
        else:
            randomized = cube.shift_randomize(base, spec.seed)
        if spec.construction == "gaussian_map":
            prepared = cube.CubePointSet(_prepare_for_gaussian(randomized.points),
                                         generator=randomized.generator,
                                         randomization=randomized.randomization,
                                         seed=randomized.seed)
            return sphere.gaussian_map(prepared)
        return sphere.equal_area_map(randomized)
    if spec.scheme == "rqsw_rotation":
        base = _deterministic_directions(spec.construction, L, d)
        rotation = sphere.sample_rotation(d, spec.seed)
        return sphere.rotate_pointset(base, rotation)
    raise ConfigError(f"unknown scheme {spec.scheme!r}")


# ---------------------------------------------------------------------------
# Estimation


@dataclass(frozen=True)
class SwEstimate:
    """A sliced Wasserstein estimate: SW_p^p plus per-direction terms."""

    value: float
    per_projection: np.ndarray
    spec: EstimatorSpec
    direction_construction: str
    direction_seed: int | None

    @property
    def root(self) -> float:
        """SW_p (p-th root of the estimated SW_p^p)."""
        return float(self.value ** (1.0 / self.spec.order))


def _check_clouds(mu: PointCloud, nu: PointCloud) -> None:
    if mu.dim != nu.dim:
        raise ShapeError(f"cloud dimensions differ: {mu.dim} vs {nu.dim}")


def _per_projection_w(mu: PointCloud, nu: PointCloud, directions: np.ndarray,
                      p: float) -> np.ndarray:
    """W_p^p along every direction; columns processed in bounded chunks."""
    L = directions.shape[0]
    out = np.empty(L)
    fast = mu.is_uniform and nu.is_uniform and mu.size == nu.size
    if fast:
        chunk = max(1, _CHUNK_ELEMENTS // max(mu.size, 1))
        for lo in range(0, L, chunk):
            block = directions[lo:lo + chunk]
            a = np.sort(mu.supports @ block.T, axis=0)
            b = np.sort(nu.supports @ block.T, axis=0)
            if p == 2.0:
                d = a - b
                out[lo:lo + chunk] = np.mean(d * d, axis=0)
            else:
                out[lo:lo + chunk] = np.mean(np.abs(a - b) ** p, axis=0)
        return out
    for l in range(L):
        pa = ot1d.Projected1D(mu.supports @ directions[l], weights=mu.weights)
        pb = ot1d.Projected1D(nu.supports @ directions[l], weights=nu.weights)
        out[l] = ot1d.wasserstein_1d(pa, pb, p)
    return out


def estimate_sw(mu: PointCloud, nu: PointCloud, spec: EstimatorSpec) -> SwEstimate:
    """Estimate SW_p^p(mu, nu) with the direction set the spec describes.

    Deterministic given the spec (seed included); per-projection terms are
    accumulated in index order for bit-reproducibility.
    """
    _check_clouds(mu, nu)
    directions = resolve_directions(spec, mu.dim)
    per = _per_projection_w(mu, nu, directions.directions, spec.order)
    return SwEstimate(value=float(per.mean()), per_projection=per, spec=spec,
                      direction_construction=directions.construction,
                      direction_seed=spec.seed)


# ---------------------------------------------------------------------------
# Gradients


def _check_gradient_regime(mu_fixed: PointCloud, z: PointCloud, spec: EstimatorSpec):
    if spec.order != 2.0:
        raise UnsupportedRegimeError("gradients are implemented for order p = 2")
    if not (mu_fixed.is_uniform and z.is_uniform):
        raise UnsupportedRegimeError("gradients need uniform weights")
    if mu_fixed.size != z.size:
        raise UnsupportedRegimeError(
            f"gradients need equal sizes, got {z.size} and {mu_fixed.size}"
        )
    _check_clouds(mu_fixed, z)


def _grad_and_value(mu_fixed: PointCloud, z: PointCloud,
                    directions: np.ndarray) -> tuple[np.ndarray, float]:
    """Gradient of the estimated SW_2^2 with respect to z, plus the value.

    Per direction the monotone (sorted) coupling matches the i-th smallest
    projection of z to the i-th smallest projection of mu_fixed; the
    gradient at z_i is (2 / (n L)) sum_l theta_l (theta_l^T z_i - matched).
    """
    n, L = z.size, directions.shape[0]
    zp = z.supports @ directions.T        # (n, L)
    yp = mu_fixed.supports @ directions.T
    order_z = np.argsort(zp, axis=0, kind="stable")
    order_y = np.argsort(yp, axis=0, kind="stable")
    diff_sorted = (np.take_along_axis(zp, order_z, axis=0)
                   - np.take_along_axis(yp, order_y, axis=0))
    value = float(np.mean(diff_sorted * diff_sorted))
    residual = np.empty_like(zp)
    np.put_along_axis(residual, order_z, diff_sorted, axis=0)
    grad = (2.0 / (n * L)) * (residual @ directions)
    return grad, value


def grad_sw(mu_fixed: PointCloud, z: PointCloud, spec: EstimatorSpec,
            target: str = "sw_p_p") -> np.ndarray:
    """Gradient of the estimated SW distance with respect to z's supports.

    ``target='sw_p_p'`` differentiates SW_2^2; ``target='sw_p'`` applies the
    chain rule for the root form SW_2 (zero matrix at value 0, the
    subgradient convention).
    """
    if target not in ("sw_p_p", "sw_p"):
        raise ConfigError(f"target must be 'sw_p_p' or 'sw_p', got {target!r}")
    _check_gradient_regime(mu_fixed, z, spec)
    directions = resolve_directions(spec, z.dim)
    grad, value = _grad_and_value(mu_fixed, z, directions.directions)
    if target == "sw_p":
        if value == 0.0:
            return np.zeros_like(grad)
        grad = grad / (2.0 * np.sqrt(value))
    return grad


# ---------------------------------------------------------------------------
# Confidence intervals


@dataclass(frozen=True)
class ConfidenceInterval:
    """Interval for SW_p^p from M independent replicates."""

    lo: float
    hi: float
    center: float
    level: float
    method: str
    replicates: int
    bootstrap_count: int | None = None

    @property
    def half_width(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi


def confidence_interval(mu: PointCloud, nu: PointCloud, spec: EstimatorSpec,
                        M: int, alpha: float = 0.05, method: str = "clt",
                        B: int = 1000) -> ConfidenceInterval:
    """CLT or bootstrap interval from M independent RQSW replicates.

    Validity rests on the replicates being unbiased, so only the randomized
    QMC schemes are accepted.
    """
    if spec.scheme not in ("rqsw_pushforward", "rqsw_rotation"):
        raise InvalidSchemeError(
            "confidence intervals need an unbiased randomized scheme "
            f"(rqsw_*), got {spec.scheme!r}"
        )
    if M < 2:
        raise ConfigError(f"need M >= 2 replicates, got {M}")
    if not 0.0 < alpha <= 1.0:
        raise ConfigError(f"alpha must be in (0, 1], got {alpha}")
    if method not in ("clt", "bootstrap"):
        raise ConfigError(f"method must be 'clt' or 'bootstrap', got {method!r}")
    if method == "bootstrap" and B < 100:
        raise ConfigError(f"bootstrap needs B >= 100, got {B}")

    estimates = np.array([
        estimate_sw(mu, nu, spec.with_seed(derive_seed(spec.seed, m))).value
        for m in range(M)
    ])
    center = float(estimates.mean())
    if method == "clt":
        sd = float(estimates.std(ddof=1))
        z = inverse_normal_cdf(1.0 - 0.5 * alpha) if alpha < 1.0 else 0.0
        half = z * sd / np.sqrt(M)
        return ConfidenceInterval(lo=center - half, hi=center + half,
                                  center=center, level=1.0 - alpha, method="clt",
                                  replicates=M)
    rng = np.random.default_rng(derive_seed(spec.seed, M + 7919))
    resamples = rng.integers(0, M, size=(B, M))
    means = estimates[resamples].mean(axis=1)
    lo, hi = np.quantile(means, [0.5 * alpha, 1.0 - 0.5 * alpha])
    return ConfidenceInterval(lo=float(lo), hi=float(hi), center=center,
                              level=1.0 - alpha, method="bootstrap",
                              replicates=M, bootstrap_count=B)
