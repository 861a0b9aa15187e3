"""Spherical cap discrepancy on S^2.

The discrepancy of a point set is the supremum over caps
C(w, t) = {x : <w, x> <= t} of |empirical mass - uniform mass|, where the
uniform mass of a cap on S^2 has the closed form (1 + t)/2.

The supremum is evaluated over a finite candidate family: cap normals taken
from the points themselves, from normalized pairwise sums, and from
normalized pairwise cross products (each with both signs), and thresholds
taken from the inner products of each normal with all points, evaluated
both closed and open (the open side realized as t - 1e-9).  The result is
a certified lower bound on the true supremum and matches it exactly on
configurations whose extremal caps pass through at most two points.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionUnsupportedError, DomainError, SizeLimitError
from .sphere import SpherePointSet

_MAX_POINTS = 2000       # O(L^3) candidate budget
_OPEN_EPS = 1e-9
_CHUNK_ROWS = 4096
_PAIR_NORM_TOL = 1e-12   # skip sums/crosses of (anti)parallel pairs


def cap_measure(t: float) -> float:
    """Uniform measure of the cap {x in S^2 : <w, x> <= t} for any w."""
    if not -1.0 <= t <= 1.0:
        raise DomainError(f"cap threshold must lie in [-1, 1], got {t}")
    return 0.5 * (1.0 + t)


def _candidate_normals(dirs: np.ndarray):
    """Yield blocks of candidate cap normals (unit rows, one sign each).

    The evaluation handles the negated normal of every row analytically,
    so only one representative per +-pair is generated.
    """
    yield dirs
    L = dirs.shape[0]
    for i in range(L - 1):
        rest = dirs[i + 1:]
        for block in (dirs[i] + rest, np.cross(dirs[i], rest)):
            norms = np.linalg.norm(block, axis=1)
            keep = norms > _PAIR_NORM_TOL
            if np.any(keep):
                yield block[keep] / norms[keep, None]


def _chunks(blocks, rows: int):
    """Regroup arbitrary-size blocks into chunks of about ``rows`` rows."""
    buffer, count = [], 0
    for block in blocks:
        buffer.append(block)
        count += block.shape[0]
        if count >= rows:
            yield np.concatenate(buffer, axis=0)
            buffer, count = [], 0
    if buffer:
        yield np.concatenate(buffer, axis=0)


def _tie_run_counts(sorted_dots: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per entry of each ascending row: (#values <= entry, #values < entry).

    Ties are resolved exactly by propagating run boundaries, so equal dot
    products (which sum/cross candidates produce by construction) count
    correctly.
    """
    rows, L = sorted_dots.shape
    count_le = np.broadcast_to(np.arange(1, L + 1), (rows, L)).copy()
    count_lt = np.broadcast_to(np.arange(L), (rows, L)).copy()
    if L == 1:
        return count_le, count_lt
    eq = sorted_dots[:, 1:] == sorted_dots[:, :-1]
    if eq.any():
        for k in range(L - 2, -1, -1):     # run end propagates leftward
            tied = eq[:, k]
            count_le[tied, k] = count_le[tied, k + 1]
        for k in range(1, L):              # run start propagates rightward
            tied = eq[:, k - 1]
            count_lt[tied, k] = count_lt[tied, k - 1]
    return count_le, count_lt


def _max_cap_deviation(normals: np.ndarray, dirs: np.ndarray) -> float:
    """Largest |F_L(C) - sigma0(C)| over caps with normals ``+-w`` for each
    row ``w`` and thresholds at the point dot products, closed and open."""
    L = dirs.shape[0]
    dots = np.sort(normals @ dirs.T, axis=1)  # (C, L) ascending
    count_le, count_lt = _tie_run_counts(dots)
    frac_le = count_le / L
    frac_lt = count_lt / L

    meas = 0.5 * (1.0 + dots)

    # normal +w: caps {<w, x> <= t}
    dev = np.abs(frac_le - meas)
    # open side, threshold t - eps: the empirical count drops to the strict
    # count; both deviation signs are bounded so the result stays a
    # certified lower bound on the supremum
    np.maximum(dev, (meas - 0.5 * _OPEN_EPS) - frac_lt, out=dev)
    np.maximum(dev, frac_lt - meas, out=dev)

    # normal -w: caps {<w, x> >= t}, measure (1 - t)/2 at threshold -t
    meas_neg = 1.0 - meas
    np.maximum(dev, np.abs((1.0 - frac_lt) - meas_neg), out=dev)
    np.maximum(dev, (meas_neg - 0.5 * _OPEN_EPS) - (1.0 - frac_le), out=dev)
    np.maximum(dev, (1.0 - frac_le) - meas_neg, out=dev)

    best = float(dev.max())

    # extreme threshold t = -1 (measure 0) for both signs; t = +1 deviates by 0
    bottom = (dots <= -1.0).sum(axis=1).max()
    top = (dots >= 1.0).sum(axis=1).max()
    return max(best, bottom / L, top / L)


def spherical_cap_discrepancy(points: SpherePointSet) -> float:
    """Cap discrepancy of a point set on S^2 (certified lower bound)."""
    if points.dim != 3:
        raise DimensionUnsupportedError(
            f"cap discrepancy is implemented for d=3, got d={points.dim}"
        )
    if points.count > _MAX_POINTS:
        raise SizeLimitError(
            f"cap discrepancy caps L at {_MAX_POINTS} (got L={points.count})"
        )
    dirs = points.directions
    best = 0.0
    for chunk in _chunks(_candidate_normals(dirs), _CHUNK_ROWS):
        best = max(best, _max_cap_deviation(chunk, dirs))
    return best
