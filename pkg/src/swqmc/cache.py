"""Disk cache for energy-optimized sphere point sets.

Building a max-distance or min-Coulomb configuration is a one-time cost:
sets are computed on first request and stored as plain-text matrices (one
direction per line, space-separated, 17 significant digits, so float64
values round-trip exactly).  File names encode the construction, the point
count, and a hash of the optimizer configuration.

Lookup order: the writable cache directory (``SWQMC_CACHE_DIR`` if set,
otherwise ``~/.cache/swqmc/pointsets``), then the read-only sets bundled
with the package.  Misses are built and stored in the writable directory.
"""

from __future__ import annotations

import hashlib
import importlib.resources
import os
from pathlib import Path

import numpy as np

from . import sphere
from .sphere import SpherePointSet

CACHE_ENV_VAR = "SWQMC_CACHE_DIR"

_OPTIMIZED = {
    "max_distance": sphere.optimize_max_distance,
    "min_coulomb": sphere.optimize_min_coulomb,
}

# L values pre-built into the package data directory.
BUNDLED_COUNTS = (8, 10, 16, 32, 50, 100, 128, 500, 512, 1000, 2048)


def _optimizer_config_hash() -> str:
    desc = (
        f"init=spiral;iterations={sphere.OPTIMIZER_ITERATIONS};"
        f"step=0.1*L**-0.5;backtrack={sphere.OPTIMIZER_BACKTRACK};"
        f"reltol={sphere.OPTIMIZER_REL_TOL}"
    )
    return hashlib.sha256(desc.encode()).hexdigest()[:12]


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "swqmc" / "pointsets"


def cache_filename(construction: str, L: int) -> str:
    return f"{construction}_L{L}_{_optimizer_config_hash()}.txt"


def format_pointset(directions: np.ndarray) -> str:
    lines = [" ".join(f"{v:.17g}" for v in row) for row in np.asarray(directions)]
    return "\n".join(lines) + "\n"


def parse_pointset(text: str) -> np.ndarray:
    rows = [
        [float(tok) for tok in line.split()]
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    return np.asarray(rows, dtype=np.float64)


def write_pointset(path: Path, directions: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_pointset(directions))


def _bundled_text(name: str) -> str | None:
    resource = importlib.resources.files("swqmc").joinpath(f"data/pointsets/{name}")
    try:
        return resource.read_text()
    except (FileNotFoundError, NotADirectoryError):
        return None


def load_optimized(construction: str, L: int) -> SpherePointSet:
    """Return the optimized set for (construction, L), building it on a miss."""
    if construction not in _OPTIMIZED:
        raise ValueError(
            f"no cached construction named '{construction}'; "
            f"expected one of {sorted(_OPTIMIZED)}"
        )
    name = cache_filename(construction, L)

    local = cache_dir() / name
    if local.is_file():
        return SpherePointSet(parse_pointset(local.read_text()), construction=construction)

    bundled = _bundled_text(name)
    if bundled is not None:
        return SpherePointSet(parse_pointset(bundled), construction=construction)

    built = _OPTIMIZED[construction](sphere.spiral_points(L))
    # round-trip through the text format so cached and fresh results agree bitwise
    directions = parse_pointset(format_pointset(built.directions))
    write_pointset(local, directions)
    return SpherePointSet(directions, construction=construction, meta=dict(built.meta))
