"""Low-discrepancy point sets on the unit hypercube.

Provides the digital base-2 (Sobol-type) sequence driven by a bundled
direction-number table, the radical-inverse (Halton) sequence in prime
bases, two cube-level randomizations (modulo-1 shift, base-2 linear matrix
scrambling with digital shift), and an exact small-instance star-discrepancy
evaluator used as a test oracle.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionUnsupportedError,
    IndexRangeError,
    SizeLimitError,
    UnsupportedRandomizationError,
)

_BITS = 32
_SCALE = float(1 << _BITS)
_MAX_INDEX = 1 << _BITS

_HALTON_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
HALTON_MAX_DIM = len(_HALTON_PRIMES)

# Exact star-discrepancy budget: the evaluator enumerates the full
# coordinate grid, so instance sizes are capped per dimension.
_STAR_LIMITS = {1: 512, 2: 512, 3: 128}


@dataclass(frozen=True)
class CubePointSet:
    """L points in [0, 1)^d with provenance tags.

    With ``randomization == "none"`` the points are a pure function of
    ``(generator, d, L, offset)``.
    """

    points: np.ndarray
    generator: str
    randomization: str = "none"
    seed: int | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"point matrix must be (L>=1, d>=1), got shape {pts.shape}")
        if np.any(pts < 0.0) or np.any(pts >= 1.0):
            raise ValueError("cube coordinates must lie in [0, 1)")
        object.__setattr__(self, "points", pts)

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


# ---------------------------------------------------------------------------
# Digital (Sobol-type) sequence


def _load_direction_table() -> list[tuple[int, int, list[int]]]:
    """Parse the bundled direction-number file (dimensions 2 and up)."""
    text = (
        importlib.resources.files("swqmc")
        .joinpath("data/direction_numbers.txt")
        .read_text()
    )
    rows = []
    expected_dim = 2
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [int(tok) for tok in line.split()]
        d, s, a, m = fields[0], fields[1], fields[2], fields[3:]
        if d != expected_dim:
            raise ValueError(f"direction table rows out of order at dimension {d}")
        if len(m) != s:
            raise ValueError(f"dimension {d}: expected {s} initial values, got {len(m)}")
        for k, mk in enumerate(m, start=1):
            if mk % 2 == 0 or mk >= (1 << k):
                raise ValueError(f"dimension {d}: m_{k}={mk} must be odd and < 2^{k}")
        rows.append((s, a, m))
        expected_dim += 1
    return rows


_DIRECTION_TABLE = _load_direction_table()
SOBOL_MAX_DIM = 1 + len(_DIRECTION_TABLE)


def _direction_integers(dim: int) -> np.ndarray:
    """32-bit direction integers V[k] (k = 0.._BITS-1) for one dimension.

    Dimension 1 is the van der Corput sequence: V[k] = 2^(31-k).  Higher
    dimensions expand the tabulated initial values through the recurrence
        V[k] = V[k-s] ^ (V[k-s] >> s) ^ XOR_{i=1..s-1} a_i V[k-i].
    """
    v = np.zeros(_BITS, dtype=np.uint64)
    if dim == 1:
        for k in range(_BITS):
            v[k] = 1 << (_BITS - 1 - k)
        return v
    s, a, m = _DIRECTION_TABLE[dim - 2]
    for k in range(min(s, _BITS)):
        v[k] = m[k] << (_BITS - 1 - k)
    for k in range(s, _BITS):
        acc = v[k - s] ^ (v[k - s] >> np.uint64(s))
        for i in range(1, s):
            if (a >> (s - 1 - i)) & 1:
                acc ^= v[k - i]
        v[k] = acc
    return v


def _sobol_state(direction: np.ndarray, index: int) -> np.uint64:
    """Integer state of the sequence at ``index`` (Gray-code order)."""
    gray = index ^ (index >> 1)
    state = np.uint64(0)
    k = 0
    while gray:
        if gray & 1:
            state ^= direction[k]
        gray >>= 1
        k += 1
    return state


def sobol_generate(d: int, L: int, offset: int = 0) -> CubePointSet:
    """First ``L`` points of the base-2 digital sequence, from ``offset``.

    Index 0 is the all-zeros point; dimension 1 walks the base-2 van der
    Corput values in Gray-code order.  Pure function of its arguments.
    """
    if d < 1 or d > SOBOL_MAX_DIM:
        raise DimensionUnsupportedError(
            f"digital sequence supports 1 <= d <= {SOBOL_MAX_DIM}, got {d}"
        )
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if offset < 0:
        raise ValueError(f"offset must be >= 0, got {offset}")
    if offset + L > _MAX_INDEX:
        raise IndexRangeError(
            f"indices up to {offset + L - 1} exceed the 32-bit range of the construction"
        )

    directions = [_direction_integers(j + 1) for j in range(d)]
    state = np.array([_sobol_state(directions[j], offset) for j in range(d)], dtype=np.uint64)
    out = np.empty((L, d), dtype=np.uint64)
    out[0] = state
    for i in range(1, L):
        idx = offset + i
        k = (idx & -idx).bit_length() - 1  # count of trailing zeros
        for j in range(d):
            state[j] ^= directions[j][k]
        out[i] = state
    return CubePointSet(out.astype(np.float64) / _SCALE, generator="sobol")


# ---------------------------------------------------------------------------
# Halton sequence


def _radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    values = np.zeros(indices.shape, dtype=np.float64)
    remaining = indices.astype(np.int64).copy()
    scale = 1.0 / base
    while np.any(remaining > 0):
        values += (remaining % base) * scale
        remaining //= base
        scale /= base
    return values


def halton_generate(d: int, L: int) -> CubePointSet:
    """Halton points: coordinate j of point i is the radical inverse of
    ``i`` in the j-th prime base.  Indexing starts at 1, avoiding the origin.
    """
    if d < 1 or d > HALTON_MAX_DIM:
        raise DimensionUnsupportedError(
            f"Halton sequence supports 1 <= d <= {HALTON_MAX_DIM}, got {d}"
        )
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    indices = np.arange(1, L + 1)
    cols = [_radical_inverse(indices, _HALTON_PRIMES[j]) for j in range(d)]
    return CubePointSet(np.column_stack(cols), generator="halton")


def random_generate(d: int, L: int, seed: int) -> CubePointSet:
    """Seeded pseudo-random cube points (the MC baseline in comparisons)."""
    if d < 1 or L < 1:
        raise ValueError("need d >= 1 and L >= 1")
    rng = np.random.default_rng(seed)
    return CubePointSet(rng.random((L, d)), generator="random", seed=seed)


# ---------------------------------------------------------------------------
# Randomizations


def shift_by(points: CubePointSet, offset: np.ndarray) -> CubePointSet:
    """Translate every point by ``offset`` modulo 1 (Cranley-Patterson)."""
    offset = np.asarray(offset, dtype=np.float64)
    if offset.shape != (points.dim,):
        raise ValueError(f"offset must have shape ({points.dim},), got {offset.shape}")
    shifted = np.mod(points.points + offset, 1.0)
    # mod can return 1.0 when the sum rounds to exactly 2.0's neighbour
    shifted[shifted >= 1.0] = 0.0
    return CubePointSet(shifted, generator=points.generator, randomization="shift",
                        seed=points.seed)


def shift_randomize(points: CubePointSet, seed: int) -> CubePointSet:
    """Shift by a single uniform vector drawn from ``seed``.

    Preserves pairwise displacements modulo 1.
    """
    rng = np.random.default_rng(seed)
    shifted = shift_by(points, rng.random(points.dim))
    return CubePointSet(shifted.points, generator=points.generator,
                        randomization="shift", seed=seed)


def _identity_scramble_columns(d: int) -> np.ndarray:
    cols = np.zeros((d, _BITS), dtype=np.uint64)
    for k in range(_BITS):
        cols[:, k] = 1 << (_BITS - 1 - k)
    return cols


def _draw_scramble(d: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Random lower-triangular unit-diagonal bit matrices plus digital shifts.

    Column k of the matrix is stored as a 32-bit integer whose digit k
    (most significant first) is 1 and whose lower digits are Bernoulli(1/2).
    """
    rng = np.random.default_rng(seed)
    raw = rng.integers(0, _MAX_INDEX, size=(d, _BITS), dtype=np.uint64)
    cols = np.empty((d, _BITS), dtype=np.uint64)
    for k in range(_BITS):
        diag = np.uint64(1 << (_BITS - 1 - k))
        below = np.uint64((1 << (_BITS - 1 - k)) - 1)
        cols[:, k] = diag | (raw[:, k] & below)
    shifts = rng.integers(0, _MAX_INDEX, size=d, dtype=np.uint64)
    return cols, shifts


def _apply_scramble(points: np.ndarray, cols: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """GF(2) matrix product plus digital shift on 32-bit digit expansions."""
    ints = np.floor(points * _SCALE).astype(np.uint64)
    out = np.broadcast_to(shifts, ints.shape).copy()
    for k in range(_BITS):
        bit = (ints >> np.uint64(_BITS - 1 - k)) & np.uint64(1)
        out ^= bit * cols[:, k]
    return out.astype(np.float64) / _SCALE


def scramble_randomize(points: CubePointSet, seed: int) -> CubePointSet:
    """Linear matrix scrambling + digital shift, independently per dimension.

    Applies only to the base-2 digital sequence; each output point is
    marginally uniform on [0, 1)^d and the digital-net structure is
    preserved.
    """
    if points.generator != "sobol":
        raise UnsupportedRandomizationError(
            f"scrambling requires a base-2 digital point set, got generator "
            f"'{points.generator}'"
        )
    cols, shifts = _draw_scramble(points.dim, seed)
    scrambled = _apply_scramble(points.points, cols, shifts)
    return CubePointSet(scrambled, generator=points.generator,
                        randomization="scramble", seed=seed)


# ---------------------------------------------------------------------------
# Exact star discrepancy (small instances)


def star_discrepancy(points: CubePointSet | np.ndarray) -> float:
    """Exact sup-norm discrepancy of a point set in [0, 1)^d.

    Enumerates the candidate boxes whose upper corners lie on the coordinate
    grid of the points (plus the value 1), evaluating both the closed and the
    open counting variant at each corner; the maximum over those corners is
    the exact supremum.  Instance sizes are capped (L <= 512 for d <= 2,
    L <= 128 for d = 3) because the grid has (L+1)^d cells.
    """
    pts = points.points if isinstance(points, CubePointSet) else np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("expected an (L, d) matrix")
    L, d = pts.shape
    limit = _STAR_LIMITS.get(d)
    if limit is None:
        raise SizeLimitError(
            f"exact star discrepancy is implemented for d <= 3, got d={d}"
        )
    if L > limit:
        raise SizeLimitError(
            f"exact star discrepancy caps L at {limit} for d={d} (got L={L}); "
            "see the documented evaluator limits"
        )

    grids = []
    le_idx = np.empty((L, d), dtype=np.int64)
    lt_idx = np.empty((L, d), dtype=np.int64)
    for j in range(d):
        u = np.unique(pts[:, j])
        if u[-1] < 1.0:
            u = np.append(u, 1.0)
        grids.append(u)
        le_idx[:, j] = np.searchsorted(u, pts[:, j], side="left")
        lt_idx[:, j] = le_idx[:, j] + 1

    shape = tuple(len(g) for g in grids)
    count_le = np.zeros(shape, dtype=np.float64)
    np.add.at(count_le, tuple(le_idx.T), 1.0)
    count_lt = np.zeros(shape, dtype=np.float64)
    np.add.at(count_lt, tuple(lt_idx.T), 1.0)
    for ax in range(d):
        np.cumsum(count_le, axis=ax, out=count_le)
        np.cumsum(count_lt, axis=ax, out=count_lt)

    vol = grids[0].copy()
    for g in grids[1:]:
        vol = np.multiply.outer(vol, g)

    dev_le = np.abs(count_le / L - vol).max()
    dev_lt = np.abs(count_lt / L - vol).max()
    return float(max(dev_le, dev_lt))
