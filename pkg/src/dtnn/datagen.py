"""Synthetic problem generators with known ground truth.

All generators are pure functions of their arguments and seed (PCG64 via
``numpy.random.default_rng``); fixture files written with :mod:`dtnn.io_formats`,
not the RNG streams themselves, are the cross-implementation contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import tprod
from .tensor3 import mode3_product


@dataclass(frozen=True)
class SynthSpec:
    """Low-rank-coded synthesis: dims of the data tensor, atom count, per-slice coefficient rank."""

    dims: tuple[int, int, int]
    d: int
    slice_rank: int
    seed: int = 0

    def __post_init__(self):
        n1, n2, _ = self.dims
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if not 1 <= self.slice_rank <= min(n1, n2):
            raise ValueError(f"slice_rank must lie in [1, {min(n1, n2)}], got {self.slice_rank}")


def synth_low_rank_coded(spec: SynthSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw ``(x, z, dictionary)`` with ``x = z x3 D``.

    Each frontal slice of ``z`` is a product of standard-Gaussian factors of
    rank ``slice_rank``; ``D`` is standard Gaussian with unit-normalized
    columns.
    """
    n1, n2, n3 = spec.dims
    rng = np.random.default_rng(spec.seed)
    z = np.empty((n1, n2, spec.d))
    for i in range(spec.d):
        a = rng.standard_normal((n1, spec.slice_rank))
        b = rng.standard_normal((spec.slice_rank, n2))
        z[:, :, i] = a @ b
    d_mat = rng.standard_normal((n3, spec.d))
    d_mat /= np.linalg.norm(d_mat, axis=0)
    x = mode3_product(z, d_mat)
    return x, z, d_mat


def synth_low_tubal_rank(dims: tuple[int, int, int], r: int, seed: int = 0) -> np.ndarray:
    """Tensor of tubal rank at most ``r``: t-product of two Gaussian factors."""
    n1, n2, n3 = dims
    if not 1 <= r <= min(n1, n2):
        raise ValueError(f"r must lie in [1, {min(n1, n2)}], got {r}")
    rng = np.random.default_rng(seed)
    return tprod(rng.standard_normal((n1, r, n3)), rng.standard_normal((r, n2, n3)))


def random_mask(dims: tuple[int, int, int], sr: float, seed: int = 0) -> np.ndarray:
    """Uniform mask with exactly ``round(sr * n1*n2*n3)`` observed entries."""
    if not 0.0 < sr <= 1.0:
        raise ValueError(f"sampling rate must lie in (0, 1], got {sr}")
    n1, n2, n3 = dims
    total = n1 * n2 * n3
    count = int(round(sr * total))
    rng = np.random.default_rng(seed)
    flat = np.zeros(total, dtype=bool)
    flat[rng.choice(total, size=count, replace=False)] = True
    return flat.reshape(dims, order="F")


def slice_missing_mask(
    dims: tuple[int, int, int], sr: float, n_missing_slices: int, seed: int = 0
) -> np.ndarray:
    """Random mask with a run of adjacent frontal slices knocked out entirely.

    Mimics sensors that go dark for a stretch: sample as :func:`random_mask`,
    then clear ``n_missing_slices`` adjacent frontal slices starting at a
    seed-chosen position.
    """
    n1, n2, n3 = dims
    if not 0 <= n_missing_slices < n3:
        raise ValueError(f"n_missing_slices must lie in [0, {n3}), got {n_missing_slices}")
    if not 0.0 < sr <= 1.0:
        raise ValueError(f"sampling rate must lie in (0, 1], got {sr}")
    total = n1 * n2 * n3
    count = int(round(sr * total))
    rng = np.random.default_rng(seed)
    flat = np.zeros(total, dtype=bool)
    flat[rng.choice(total, size=count, replace=False)] = True
    mask = flat.reshape(dims, order="F").copy()
    if n_missing_slices > 0:
        start = int(rng.integers(0, n3 - n_missing_slices + 1))
        mask[:, :, start : start + n_missing_slices] = False
    return mask
