"""Gradient-flow applications: point-cloud interpolation and color transfer.

A cloud Z flows toward a target Y by explicit Euler steps on the estimated
sliced Wasserstein distance,

    Z(t) = Z(t-1) - n * eta * grad_Z [ estimated SW_2(P_Z, P_Y) ],

using the root form of the estimate by default.  Stochastic schemes (mc,
rqsw) refresh their randomness every step through derived sub-seeds;
deterministic qsw schemes reuse one fixed direction set for the whole flow.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .assignment import w2_exact
from .clouds import PointCloud
from .errors import ConfigError, DomainError
from .estimators import EstimatorSpec, _check_gradient_regime, _grad_and_value, resolve_directions
from .ppm import RgbImage
from .seeding import derive_seed


@dataclass(frozen=True)
class FlowConfig:
    """Euler-flow configuration.

    ``reseed_per_step`` defaults to the scheme's natural behavior: fresh
    randomness per step for stochastic schemes, a single fixed set for qsw
    (requesting reseeding there is a configuration error).
    ``squared_form`` switches the update to the gradient of SW_2^2 (the
    default follows the root form SW_2).
    """

    steps: int
    step_size: float
    estimator: EstimatorSpec
    checkpoint_steps: tuple = ()
    reseed_per_step: bool | None = None
    squared_form: bool = False

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps}")
        if self.step_size < 0:
            raise ConfigError(f"step_size must be >= 0, got {self.step_size}")
        checkpoints = tuple(sorted(set(int(c) for c in self.checkpoint_steps)))
        for c in checkpoints:
            if not 1 <= c <= self.steps:
                raise ConfigError(
                    f"checkpoint {c} outside the step range 1..{self.steps}"
                )
        object.__setattr__(self, "checkpoint_steps", checkpoints)
        reseed = self.reseed_per_step
        if reseed is None:
            reseed = self.estimator.is_stochastic
        elif reseed and not self.estimator.is_stochastic:
            raise ConfigError("qsw uses one fixed direction set; per-step "
                              "reseeding is not available")
        object.__setattr__(self, "reseed_per_step", reseed)


@dataclass
class FlowTrace:
    """Checkpointed history of one Euler flow."""

    checkpoint_steps: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    w2_to_target: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    step_seconds: list = field(default_factory=list)
    final_cloud: PointCloud | None = None
    final_grad_norm: float = float("nan")


def _step_spec(config: FlowConfig, step: int) -> EstimatorSpec:
    if config.reseed_per_step:
        return config.estimator.with_seed(derive_seed(config.estimator.seed, step))
    return config.estimator


def euler_interpolate(source: PointCloud, target: PointCloud,
                      config: FlowConfig, evaluate_w2: bool = True) -> FlowTrace:
    """Flow ``source`` toward ``target`` and record checkpoints.

    Requires the gradient regime (uniform weights, equal sizes, p = 2).
    Checkpoints store a snapshot, the exact W_2 to the target (optional),
    and the gradient norm of the step that produced them.
    """
    _check_gradient_regime(target, source, config.estimator)
    n = source.size
    z = source.supports.copy()
    trace = FlowTrace()
    checkpoints = set(config.checkpoint_steps)
    grad_norm = 0.0

    fixed_directions = None
    if not config.reseed_per_step:
        fixed_directions = resolve_directions(config.estimator, source.dim)

    for step in range(1, config.steps + 1):
        t0 = time.perf_counter()
        if fixed_directions is not None:
            directions = fixed_directions
        else:
            directions = resolve_directions(_step_spec(config, step), source.dim)
        grad, value = _grad_and_value(target, PointCloud(z), directions.directions)
        if not config.squared_form:
            grad = np.zeros_like(grad) if value == 0.0 else grad / (2.0 * np.sqrt(value))
        z = z - n * config.step_size * grad
        grad_norm = float(np.linalg.norm(grad))
        trace.step_seconds.append(time.perf_counter() - t0)

        if step in checkpoints:
            snapshot = PointCloud(z.copy())
            trace.checkpoint_steps.append(step)
            trace.snapshots.append(snapshot)
            trace.grad_norms.append(grad_norm)
            if evaluate_w2:
                trace.w2_to_target.append(w2_exact(snapshot, target))

    trace.final_cloud = PointCloud(z)
    trace.final_grad_norm = grad_norm
    return trace


# ---------------------------------------------------------------------------
# K-means palette reduction


def _kmeans_pp_init(colors: np.ndarray, k: int, rng: np.random.Generator,
                    chunk: int = 65536) -> np.ndarray:
    n = colors.shape[0]
    centers = np.empty((k, colors.shape[1]))
    centers[0] = colors[rng.integers(0, n)]
    dist2 = ((colors - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = dist2.sum()
        if total <= 0.0:
            # all remaining mass sits on existing centers; reuse any point
            centers[j:] = colors[rng.integers(0, n, size=k - j)]
            break
        probs = dist2 / total
        centers[j] = colors[rng.choice(n, p=probs)]
        new_d2 = ((colors - centers[j]) ** 2).sum(axis=1)
        np.minimum(dist2, new_d2, out=dist2)
    return centers


def _assign_labels(colors: np.ndarray, centers: np.ndarray,
                   chunk: int = 65536) -> tuple[np.ndarray, float]:
    """Nearest-center labels and the summed squared quantization error."""
    n = colors.shape[0]
    labels = np.empty(n, dtype=np.int64)
    error = 0.0
    c2 = (centers * centers).sum(axis=1)
    for lo in range(0, n, chunk):
        block = colors[lo:lo + chunk]
        d2 = c2[None, :] - 2.0 * (block @ centers.T)
        idx = np.argmin(d2, axis=1)
        labels[lo:lo + chunk] = idx
        chosen = d2[np.arange(block.shape[0]), idx] + (block * block).sum(axis=1)
        error += float(np.maximum(chosen, 0.0).sum())
    return labels, error


@dataclass(frozen=True)
class PaletteReduction:
    """K-means palette: centroid cloud plus the pixel-to-centroid labels."""

    palette: PointCloud
    labels: np.ndarray
    quantization_error: float


def kmeans_palette(image: RgbImage, k: int, seed: int,
                   max_iters: int = 50) -> PaletteReduction:
    """Reduce an image to k representative colors by Lloyd iterations with
    k-means++ seeding.  Weights of the returned cloud are proportional to
    cluster sizes; the quantization error is non-increasing per iteration.
    """
    colors = image.flatten_colors()
    n = colors.shape[0]
    if k < 1 or k > n:
        raise DomainError(f"need 1 <= k <= pixel count ({n}), got {k}")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(colors, k, rng)
    labels, error = _assign_labels(colors, centers)
    for _ in range(max_iters):
        counts = np.bincount(labels, minlength=k).astype(np.float64)
        sums = np.zeros_like(centers)
        np.add.at(sums, labels, colors)
        nonempty = counts > 0
        centers = centers.copy()
        centers[nonempty] = sums[nonempty] / counts[nonempty, None]
        labels, new_error = _assign_labels(colors, centers)
        if error - new_error <= 1e-12 * max(error, 1.0):
            error = new_error
            break
        error = new_error
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    weights = counts / counts.sum()
    return PaletteReduction(palette=PointCloud(centers, weights),
                            labels=labels, quantization_error=error)


# ---------------------------------------------------------------------------
# Color transfer


def color_transfer(source: RgbImage, target: RgbImage, config: FlowConfig,
                   k: int = 3000, kmeans_seed: int = 0) -> tuple[RgbImage, float]:
    """Move the source palette toward the target palette and repaint.

    Both images are reduced to k colors; the flow runs between the two
    centroid clouds with uniform weights, the final palette is rounded to
    integers in [0, 255] (rounding only at the last step), and source
    pixels are repainted through their cluster labels.  Returns the
    transferred image and the exact W_2 between the final (rounded) palette
    and the target palette.
    """
    k_src = min(k, source.width * source.height)
    k_tgt = min(k, target.width * target.height)
    k_common = min(k_src, k_tgt)  # flow needs equal-size palettes
    src = kmeans_palette(source, k_common, seed=derive_seed(kmeans_seed, 0))
    tgt = kmeans_palette(target, k_common, seed=derive_seed(kmeans_seed, 1))

    src_palette = PointCloud(src.palette.supports)   # uniform weights for the flow
    tgt_palette = PointCloud(tgt.palette.supports)
    trace = euler_interpolate(src_palette, tgt_palette, config, evaluate_w2=False)

    moved = np.clip(np.rint(trace.final_cloud.supports), 0.0, 255.0)
    final_palette = PointCloud(moved)
    palette_w2 = w2_exact(final_palette, tgt_palette)

    repainted = moved[src.labels].reshape(source.height, source.width, 3)
    return RgbImage(repainted.astype(np.uint8)), palette_w2
