"""Deterministic sample points and test frames.

Points come from a 64-bit linear congruential stream mapped uniformly into
the sampling box.  Each sample consumes a fixed number of draws (its
coordinates, then the coefficients of its random frame vectors), so the first
``N`` samples of a larger run are exactly the samples of a run of size ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
LCG_A = 6364136223846793005
LCG_C = 1442695040888963407

N_RANDOM_FRAME = 4


class LCG64:
    """x_{k+1} = a x_k + c mod 2^64; uniforms from the top 53 bits."""

    def __init__(self, seed: int):
        self.state = (int(seed) ^ 0x9E3779B97F4A7C15) & MASK64
        self.next_u64()

    def next_u64(self) -> int:
        self.state = (LCG_A * self.state + LCG_C) & MASK64
        return self.state

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class SampleSet:
    """Sample points ``(N, dim)`` and random frame coefficients ``(N, R, dim)``."""

    points: np.ndarray
    combos: np.ndarray

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def frame(self, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """Frame vectors ``(E, n, dim)``: the coordinate frame, then the random combinations."""
        pts = self.points[lo:hi]
        n, d = pts.shape
        coord = np.broadcast_to(np.eye(d)[:, None, :], (d, n, d))
        rand = np.moveaxis(self.combos[lo:hi], 1, 0)
        return np.concatenate([coord, rand], axis=0)


def sample_points(box, n: int, seed: int = 42, n_random: int = N_RANDOM_FRAME) -> SampleSet:
    """``n`` points uniform in ``box`` (``(dim, 2)`` array of [lo, hi]) with frame coefficients in [-1, 1]."""
    box = np.asarray(box, dtype=float)
    d = box.shape[0]
    rng = LCG64(seed)
    pts = np.empty((n, d))
    combos = np.empty((n, n_random, d))
    for k in range(n):
        for a in range(d):
            lo, hi = box[a]
            pts[k, a] = lo + (hi - lo) * rng.uniform()
        for r in range(n_random):
            for a in range(d):
                combos[k, r, a] = 2.0 * rng.uniform() - 1.0
    return SampleSet(pts, combos)
