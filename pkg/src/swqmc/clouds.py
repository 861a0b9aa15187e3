"""Weighted point clouds, file I/O, and deterministic synthetic fixtures.

Cloud files are ASCII: one support point per line, coordinates separated by
whitespace, with an optional trailing weight column; ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class PointCloud:
    """n support points in R^d with non-negative weights summing to 1.

    ``weights`` may be omitted for the uniform measure (1/n each).
    """

    supports: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.supports, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError(f"supports must be an (n>=1, d) matrix, got shape {pts.shape}")
        object.__setattr__(self, "supports", pts)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.shape != (pts.shape[0],):
                raise ValueError(
                    f"weights must have shape ({pts.shape[0]},), got {w.shape}"
                )
            if np.any(w < 0.0):
                raise ValueError("weights must be non-negative")
            if abs(w.sum() - 1.0) > _WEIGHT_TOL:
                raise ValueError(f"weights must sum to 1 within {_WEIGHT_TOL}, "
                                 f"got {w.sum()!r}")
            object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.supports.shape[0]

    @property
    def dim(self) -> int:
        return self.supports.shape[1]

    @property
    def is_uniform(self) -> bool:
        return self.weights is None

    def effective_weights(self) -> np.ndarray:
        if self.weights is not None:
            return self.weights
        n = self.size
        return np.full(n, 1.0 / n)


def load_point_cloud(path, weight_column: bool = False) -> PointCloud:
    """Read a cloud file; raises ParseError with a line number on bad input."""
    path = Path(path)
    rows, weights = [], []
    width = None
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read point cloud: {exc}", path=path) from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values = [float(tok) for tok in line.split()]
        except ValueError as exc:
            raise ParseError(f"non-numeric value: {exc}", path=path, line=lineno) from exc
        if width is None:
            width = len(values)
            if width < (2 if weight_column else 1):
                raise ParseError("too few columns", path=path, line=lineno)
        elif len(values) != width:
            raise ParseError(
                f"inconsistent column count (expected {width}, got {len(values)})",
                path=path, line=lineno,
            )
        if weight_column:
            rows.append(values[:-1])
            weights.append(values[-1])
        else:
            rows.append(values)
    if not rows:
        raise ParseError("file contains no points", path=path)
    supports = np.asarray(rows, dtype=np.float64)
    if not weight_column:
        return PointCloud(supports)
    w = np.asarray(weights, dtype=np.float64)
    total = w.sum()
    if total <= 0:
        raise ParseError("weight column sums to zero", path=path)
    return PointCloud(supports, w / total)


def save_point_cloud(path, cloud: PointCloud) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    if cloud.is_uniform:
        for row in cloud.supports:
            lines.append(" ".join(f"{v:.17g}" for v in row))
    else:
        for row, w in zip(cloud.supports, cloud.weights):
            lines.append(" ".join(f"{v:.17g}" for v in row) + f" {w:.17g}")
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Synthetic fixtures


def gaussian_blob(n: int, seed: int, center=(0.0, 0.0, 0.0), scale: float = 1.0,
                  d: int = 3) -> PointCloud:
    rng = np.random.default_rng(seed)
    center = np.asarray(center, dtype=np.float64)
    return PointCloud(center + scale * rng.standard_normal((n, d)))


def gaussian_mixture(n: int, seed: int, centers, scale: float = 0.5) -> PointCloud:
    """Equal-proportion mixture of isotropic blobs at ``centers``."""
    rng = np.random.default_rng(seed)
    centers = np.asarray(centers, dtype=np.float64)
    idx = rng.integers(0, len(centers), size=n)
    pts = centers[idx] + scale * rng.standard_normal((n, centers.shape[1]))
    return PointCloud(pts)


def sphere_surface(n: int, seed: int, radius: float = 1.0,
                   center=(0.0, 0.0, 0.0)) -> PointCloud:
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, 3))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return PointCloud(np.asarray(center, dtype=np.float64) + radius * z)


def torus_surface(n: int, seed: int, ring_radius: float = 2.0,
                  tube_radius: float = 0.5) -> PointCloud:
    rng = np.random.default_rng(seed)
    u = 2.0 * np.pi * rng.random(n)
    v = 2.0 * np.pi * rng.random(n)
    r = ring_radius + tube_radius * np.cos(v)
    pts = np.column_stack((r * np.cos(u), r * np.sin(u), tube_radius * np.sin(v)))
    return PointCloud(pts)


def dirac_pair(displacement=(1.0, 0.0, 0.0)) -> tuple[PointCloud, PointCloud]:
    """Two single-point clouds separated by ``displacement``."""
    disp = np.asarray(displacement, dtype=np.float64)
    return (PointCloud(np.zeros((1, disp.shape[0]))),
            PointCloud(disp[None, :]))


SYNTHETIC_KINDS = ("blob", "mixture", "sphere", "torus")


def make_synthetic(kind: str, n: int, seed: int) -> PointCloud:
    """Named deterministic fixture used by the CLI and the test harness."""
    if kind == "blob":
        return gaussian_blob(n, seed)
    if kind == "mixture":
        return gaussian_mixture(n, seed,
                                centers=[(-2.0, 0.0, 0.0), (2.0, 1.0, 0.5)])
    if kind == "sphere":
        return sphere_surface(n, seed)
    if kind == "torus":
        return torus_surface(n, seed)
    raise ValueError(f"unknown synthetic kind '{kind}'; expected one of {SYNTHETIC_KINDS}")
