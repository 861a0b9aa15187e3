#!/usr/bin/env python3
"""Pre-build the optimized sphere point sets bundled with the package.

Energy-optimized direction sets are a one-time construction cost; this
script generates the standard sizes and writes them into the package data
directory so installed copies never pay that cost.  Re-run after changing
the optimizer configuration (file names embed a config hash, so stale sets
are simply ignored).
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from swqmc import cache, sphere  # noqa: E402

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "swqmc" / "data" / "pointsets"

OPTIMIZERS = {
    "max_distance": sphere.optimize_max_distance,
    "min_coulomb": sphere.optimize_min_coulomb,
}


def main() -> int:
    counts = [int(a) for a in sys.argv[1:]] or list(cache.BUNDLED_COUNTS)
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for L in counts:
        init = sphere.spiral_points(L)
        for name, optimize in OPTIMIZERS.items():
            path = DATA_DIR / cache.cache_filename(name, L)
            if path.is_file():
                print(f"skip {path.name} (exists)")
                continue
            t0 = time.time()
            result = optimize(init)
            cache.write_pointset(path, result.directions)
            print(f"built {path.name} in {time.time() - t0:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
