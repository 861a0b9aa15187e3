"""Closed-form one-dimensional Wasserstein distances between projected
empirical measures.

W_p^p between two measures on the line is the integral over [0, 1] of the
p-th power of the quantile-function difference.  For equal-size uniform
measures this reduces to the mean p-th power gap of the sorted samples; the
general weighted case merges the two cumulative-weight partitions and
integrates the piecewise-constant quantile difference exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clouds import PointCloud
from .errors import DomainError, ShapeError

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Projected1D:
    """Projections theta^T x_i of a cloud, with the cloud's weights.

    ``is_sorted`` marks values ordered non-decreasingly with weights
    permuted consistently.
    """

    values: np.ndarray
    weights: np.ndarray | None = None
    is_sorted: bool = False
    direction_normalized: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.shape[0] < 1:
            raise ValueError(f"values must be a non-empty vector, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.shape != vals.shape:
                raise ValueError("weights must match values in shape")
            object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def effective_weights(self) -> np.ndarray:
        if self.weights is not None:
            return self.weights
        return np.full(self.size, 1.0 / self.size)


def project(cloud: PointCloud, direction) -> Projected1D:
    """Push a cloud forward along ``direction`` (theta^T x per support).

    A direction whose norm strays from 1 beyond 1e-9 is normalized and the
    result flagged; a zero direction is rejected.
    """
    direction = np.asarray(direction, dtype=np.float64)
    if direction.shape != (cloud.dim,):
        raise ShapeError(
            f"direction has shape {direction.shape}, cloud dimension is {cloud.dim}"
        )
    norm = float(np.linalg.norm(direction))
    normalized = False
    if abs(norm - 1.0) > _UNIT_TOL:
        if norm == 0.0:
            raise DomainError("cannot project along the zero direction")
        direction = direction / norm
        normalized = True
    return Projected1D(cloud.supports @ direction, weights=cloud.weights,
                       direction_normalized=normalized)


def sort_projected(proj: Projected1D) -> Projected1D:
    """Stable sort by value; ties keep original index order."""
    if proj.is_sorted:
        return proj
    order = np.argsort(proj.values, kind="stable")
    weights = proj.weights[order] if proj.weights is not None else None
    return Projected1D(proj.values[order], weights=weights, is_sorted=True,
                       direction_normalized=proj.direction_normalized)


def _is_plain_uniform(proj: Projected1D) -> bool:
    return proj.weights is None


def _quantile_merge_cost(a: Projected1D, b: Projected1D, p: float) -> float:
    """Exact integral of |F_a^{-1}(z) - F_b^{-1}(z)|^p over z in [0, 1]."""
    sa, sb = sort_projected(a), sort_projected(b)
    wa = sa.effective_weights()
    wb = sb.effective_weights()
    ca = np.cumsum(wa)
    cb = np.cumsum(wb)
    ca[-1] = cb[-1] = 1.0  # guard accumulated rounding at the top
    grid = np.union1d(ca, cb)
    # quantile value on (grid[k-1], grid[k]] is the support whose cumulative
    # weight first reaches grid[k]
    ia = np.minimum(np.searchsorted(ca, grid, side="left"), sa.size - 1)
    ib = np.minimum(np.searchsorted(cb, grid, side="left"), sb.size - 1)
    qa = sa.values[ia]
    qb = sb.values[ib]
    seg = np.diff(np.concatenate(([0.0], grid)))
    return float(np.sum(seg * np.abs(qa - qb) ** p))


def wasserstein_1d(a: Projected1D, b: Projected1D, p: float = 2.0) -> float:
    """W_p^p between two one-dimensional empirical measures.

    Equal-size uniform measures take the sorted fast path; the weighted
    path integrates the merged quantile partition exactly.
    """
    if p < 1:
        raise DomainError(f"order p must be >= 1, got {p}")
    if a.size < 1 or b.size < 1:
        raise DomainError("measures must be non-empty")
    if _is_plain_uniform(a) and _is_plain_uniform(b) and a.size == b.size:
        xs = np.sort(a.values)
        ys = np.sort(b.values)
        if p == 2.0:
            d = xs - ys
            return float(np.mean(d * d))
        return float(np.mean(np.abs(xs - ys) ** p))
    return _quantile_merge_cost(a, b, p)


def sorted_pairing(a: Projected1D, b: Projected1D):
    """Monotone rearrangement coupling between two 1-D measures.

    Returns ``(src_idx, dst_idx, mass)`` arrays in original index space;
    total mass is 1 and per-point outgoing mass equals the point's weight.
    Ties break by original index (stable sort), making the coupling, and
    gradients built on it, deterministic.
    """
    if a.size < 1 or b.size < 1:
        raise DomainError("measures must be non-empty")
    order_a = np.argsort(a.values, kind="stable")
    order_b = np.argsort(b.values, kind="stable")
    if _is_plain_uniform(a) and _is_plain_uniform(b) and a.size == b.size:
        n = a.size
        return order_a, order_b, np.full(n, 1.0 / n)

    wa = a.effective_weights()[order_a]
    wb = b.effective_weights()[order_b]
    src, dst, mass = [], [], []
    i = j = 0
    ra, rb = float(wa[0]), float(wb[0])
    while True:
        m = min(ra, rb)
        if m > 0.0:
            src.append(order_a[i])
            dst.append(order_b[j])
            mass.append(m)
        ra -= m
        rb -= m
        if ra <= 1e-15:
            i += 1
            if i == a.size:
                break
            ra = float(wa[i])
        if rb <= 1e-15:
            j += 1
            if j == b.size:
                break
            rb = float(wb[j])
    return np.asarray(src), np.asarray(dst), np.asarray(mass)


def pairing_cost(a: Projected1D, b: Projected1D, p: float = 2.0) -> float:
    """Cost of the monotone coupling (equals ``wasserstein_1d``)."""
    src, dst, mass = sorted_pairing(a, b)
    return float(np.sum(mass * np.abs(a.values[src] - b.values[dst]) ** p))
