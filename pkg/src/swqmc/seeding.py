"""Deterministic seed splitting.

All stochastic components (replicates, per-step flow randomness, resampling)
draw their seeds through ``derive_seed`` so that a single master seed yields
reproducible, statistically independent streams.  The splitter is the
SplitMix64 output function applied to ``master + (index + 1) * GOLDEN``,
a counter-based construction: stream ``i`` depends only on ``(master, i)``.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def derive_seed(master: int, stream: int) -> int:
    """Return a 64-bit sub-seed for ``stream`` derived from ``master``.

    Pure function; distinct ``(master, stream)`` pairs give well-mixed,
    effectively independent seeds.
    """
    if master < 0:
        raise ValueError(f"master seed must be non-negative, got {master}")
    if stream < 0:
        raise ValueError(f"stream index must be non-negative, got {stream}")
    x = (master + (stream + 1) * _GOLDEN) & _MASK
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK
    x ^= x >> 31
    return x
