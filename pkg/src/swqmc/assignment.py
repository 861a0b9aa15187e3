"""Exact Wasserstein-2 between equal-size uniform clouds in R^d.

With uniform equal-size marginals the Birkhoff polytope's extreme points
are permutations, so the optimal coupling is a linear assignment.  The
solver is a shortest-augmenting-path assignment (O(n^3) worst case); an
optional post-pass recovers dual potentials by Bellman-Ford over the
column graph and reports the worst dual-feasibility violation as a
certificate of optimality.  A factorial brute-force oracle covers n <= 8.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .clouds import PointCloud
from .errors import SizeLimitError, UnsupportedRegimeError

_BRUTE_FORCE_MAX = 8
_EXACT_MAX = 10_000


@dataclass(frozen=True)
class AssignmentResult:
    """Optimal permutation with its W_2^2 cost and a dual certificate.

    ``dual_residual`` is the largest violation of u_i + v_j <= c_ij by the
    recovered potentials (non-negative, ~0 for an optimal assignment); it is
    None when the certificate pass was skipped.
    """

    permutation: np.ndarray
    cost: float
    dual_residual: float | None = None


def _check_pair(x: PointCloud, y: PointCloud) -> None:
    if x.size != y.size:
        raise UnsupportedRegimeError(
            f"exact OT needs equal sizes, got {x.size} and {y.size}"
        )
    if not (x.is_uniform and y.is_uniform):
        raise UnsupportedRegimeError("exact OT is implemented for uniform weights")
    if x.dim != y.dim:
        raise UnsupportedRegimeError(
            f"dimension mismatch: {x.dim} vs {y.dim}"
        )
    if x.size > _EXACT_MAX:
        raise SizeLimitError(f"exact OT caps n at {_EXACT_MAX}, got {x.size}")


def _cost_matrix(x: PointCloud, y: PointCloud) -> np.ndarray:
    xs, ys = x.supports, y.supports
    sq = (xs * xs).sum(1)[:, None] + (ys * ys).sum(1)[None, :] - 2.0 * (xs @ ys.T)
    return np.maximum(sq, 0.0)


def _dual_residual(cost: np.ndarray, permutation: np.ndarray) -> float:
    """Worst feasibility violation of potentials recovered from the matching.

    Potentials come from shortest-path relaxation on the column graph whose
    arc (j -> k) weighs c[row(j), k] - c[row(j), j]; for an optimal matching
    the relaxation converges and u_i + v_j <= c_ij holds up to rounding.
    """
    n = cost.shape[0]
    row_of = np.empty(n, dtype=np.int64)
    row_of[permutation] = np.arange(n)
    arc = cost[row_of, :] - cost[row_of, permutation][:, None]
    v = np.zeros(n)
    for _ in range(n):
        relaxed = np.min(v[:, None] + arc, axis=0)
        updated = np.minimum(v, relaxed)
        if np.allclose(updated, v, rtol=0.0, atol=1e-13):
            v = updated
            break
        v = updated
    u = cost[np.arange(n), permutation] - v[permutation]
    violation = (u[:, None] + v[None, :] - cost).max()
    return float(max(violation, 0.0))


def solve_assignment(x: PointCloud, y: PointCloud,
                     certificate: bool = True) -> AssignmentResult:
    """Optimal assignment between two equal-size uniform clouds.

    ``cost`` is the W_2^2 value (mean squared matched distance).
    """
    _check_pair(x, y)
    cost = _cost_matrix(x, y)
    rows, cols = linear_sum_assignment(cost)
    permutation = cols[np.argsort(rows)]
    w22 = float(cost[np.arange(x.size), permutation].mean())
    residual = _dual_residual(cost, permutation) if certificate else None
    return AssignmentResult(permutation=permutation, cost=w22,
                            dual_residual=residual)


def w2_exact(x: PointCloud, y: PointCloud) -> float:
    """Exact W_2 distance (root of the mean squared matched distance)."""
    result = solve_assignment(x, y, certificate=False)
    return float(np.sqrt(result.cost))


def w2_bruteforce(x: PointCloud, y: PointCloud) -> float:
    """Exhaustive minimum over all n! permutations; test oracle, n <= 8."""
    _check_pair(x, y)
    if x.size > _BRUTE_FORCE_MAX:
        raise SizeLimitError(
            f"brute force caps n at {_BRUTE_FORCE_MAX}, got {x.size}"
        )
    cost = _cost_matrix(x, y)
    n = x.size
    rows = np.arange(n)
    best = min(cost[rows, perm].sum() for perm in itertools.permutations(range(n)))
    return float(np.sqrt(best / n))
