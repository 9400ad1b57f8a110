"""Dense third-order tensor primitives.

Tensors are plain ``numpy`` arrays of shape ``(n1, n2, n3)`` holding float64
values; observation masks are boolean arrays over the same grid.  The linear
element order used by every reshape and by the file formats is
``offset(i, j, k) = i + j*n1 + k*n1*n2`` (Fortran order), so ``unfold3`` is a
reinterpretation plus transpose and nothing ever silently transposes.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError


def as_tensor3(t: np.ndarray) -> np.ndarray:
    """Validate and return ``t`` as a third-order float array."""
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 3:
        raise ShapeError(f"expected a third-order tensor, got ndim={t.ndim}")
    return t


def as_mask(mask: np.ndarray, dims: tuple[int, int, int] | None = None) -> np.ndarray:
    """Validate and return ``mask`` as a boolean tensor, optionally checking dims."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 3:
        raise ShapeError(f"expected a third-order mask, got ndim={mask.ndim}")
    if dims is not None and mask.shape != tuple(dims):
        raise ShapeError(f"mask dims {mask.shape} do not match tensor dims {tuple(dims)}")
    return mask


def unfold3(t: np.ndarray) -> np.ndarray:
    """Mode-3 unfolding: an ``n3 x n1*n2`` matrix whose column ``i + j*n1`` is the tube ``t[i, j, :]``."""
    if t.ndim != 3:
        raise ShapeError(f"expected a third-order tensor, got ndim={t.ndim}")
    n1, n2, n3 = t.shape
    return np.ascontiguousarray(t.reshape(n1 * n2, n3, order="F").T)


def fold3(m: np.ndarray, dims: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`unfold3` for the given ``(n1, n2, n3)`` dims."""
    n1, n2, n3 = dims
    m = np.asarray(m)
    if m.ndim != 2 or m.shape != (n3, n1 * n2):
        raise ShapeError(f"expected a {n3} x {n1 * n2} matrix, got shape {m.shape}")
    return m.T.reshape((n1, n2, n3), order="F")


def mode3_product(t: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Mode-3 tensor-matrix product: ``fold3(a @ unfold3(t))``.

    ``a`` has shape ``(m, n3)``; the result has shape ``(n1, n2, m)``.
    """
    if t.ndim != 3:
        raise ShapeError(f"expected a third-order tensor, got ndim={t.ndim}")
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[1] != t.shape[2]:
        raise ShapeError(
            f"matrix with {getattr(a, 'shape', None)} columns does not conform to depth {t.shape[2]}"
        )
    n1, n2, _ = t.shape
    return fold3(a @ unfold3(t), (n1, n2, a.shape[0]))


def frobenius_norm(t: np.ndarray) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(t).ravel()))


def project_observed(x: np.ndarray, o: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Return ``o`` on the observed set and ``x`` elsewhere.

    Observed values are copied bit-exactly from ``o``.
    """
    x = np.asarray(x)
    o = np.asarray(o)
    mask = np.asarray(mask, dtype=bool)
    if not (x.shape == o.shape == mask.shape):
        raise ShapeError(f"dims differ: x {x.shape}, o {o.shape}, mask {mask.shape}")
    return np.where(mask, o, x)
