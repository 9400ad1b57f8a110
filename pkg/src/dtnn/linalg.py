"""Matrix SVD, nuclear norm, and the singular value thresholding operator.

The SVD itself is delegated to LAPACK through ``numpy.linalg``; this module
pins the conventions the rest of the package relies on (descending singular
values, ``u @ diag(s) @ v.conj().T`` reconstruction, a shared numerical rank
cutoff).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NumericError

# Singular values below RANK_CUTOFF * sigma_max count as zero for rank purposes.
RANK_CUTOFF = 1e-12


class SvdFactors(NamedTuple):
    u: np.ndarray  # m x r, orthonormal columns
    s: np.ndarray  # length r, descending, nonnegative
    v: np.ndarray  # n x r, orthonormal columns

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.v.conj().T


def svd(m: np.ndarray) -> SvdFactors:
    """Thin SVD with ``r = min(m, n)`` factors; accepts real or complex input."""
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise NumericError("svd input contains non-finite entries")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return SvdFactors(u, s, vh.conj().T)


def singular_values(m: np.ndarray) -> np.ndarray:
    return np.linalg.svd(np.asarray(m), compute_uv=False)


def nuclear_norm(m: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(m)))


def matrix_rank(m: np.ndarray) -> int:
    """Rank with singular values below ``RANK_CUTOFF * sigma_max`` treated as zero."""
    s = singular_values(m)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > RANK_CUTOFF * s[0]))


def svt(m: np.ndarray, tau: float) -> np.ndarray:
    """Singular value thresholding: soft-threshold the singular values by ``tau``.

    Returns the unique minimizer of ``tau*||Z||_* + 0.5*||Z - m||_F^2``.
    """
    if tau < 0:
        raise ValueError(f"threshold must be nonnegative, got {tau}")
    u, s, v = svd(m)
    shrunk = np.maximum(s - tau, 0.0)
    return (u * shrunk) @ v.conj().T
