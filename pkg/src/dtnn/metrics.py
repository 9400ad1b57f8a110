"""Quantitative quality measures for completed tensors.

PSNR, SSIM, and UIQI are computed per frontal slice and averaged; SAM runs
over mode-3 tubes; RMSE and MAPE are global.  ``dict_err`` scores a learned
dictionary against a known one up to column permutation and sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import MetricUndefinedError, ShapeError

PSNR_CAP_DB = 100.0
_SSIM_K1 = 0.01
_SSIM_K2 = 0.03
_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_UIQI_WINDOW = 8


@dataclass
class MetricsReport:
    psnr_slices: list[float] = field(default_factory=list)
    psnr_mean: float | None = None
    ssim_mean: float | None = None
    uiqi_mean: float | None = None
    sam_mean: float | None = None
    rmse: float | None = None
    mape: float | None = None
    dict_err: float | None = None


def _check_pair(gt: np.ndarray, rec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gt = np.asarray(gt, dtype=np.float64)
    rec = np.asarray(rec, dtype=np.float64)
    if gt.shape != rec.shape:
        raise ShapeError(f"dims differ: {gt.shape} vs {rec.shape}")
    if gt.ndim != 3:
        raise ShapeError(f"expected third-order tensors, got ndim={gt.ndim}")
    return gt, rec


def psnr_slices(gt: np.ndarray, rec: np.ndarray, peak: float = 1.0) -> np.ndarray:
    """Per-frontal-slice PSNR in dB, capped at 100 for exact matches."""
    gt, rec = _check_pair(gt, rec)
    if peak <= 0:
        raise ValueError(f"peak must be positive, got {peak}")
    diff = gt - rec
    mse = np.mean(diff * diff, axis=(0, 1))
    out = np.full(gt.shape[2], PSNR_CAP_DB)
    nz = mse > 0.0
    out[nz] = np.minimum(PSNR_CAP_DB, 10.0 * np.log10(peak * peak / mse[nz]))
    return out


def psnr(gt: np.ndarray, rec: np.ndarray, peak: float = 1.0) -> float:
    return float(psnr_slices(gt, rec, peak).mean())


def _gaussian_window(wx: int, wy: int, sigma: float) -> np.ndarray:
    gx = np.exp(-((np.arange(wx) - (wx - 1) / 2.0) ** 2) / (2.0 * sigma * sigma))
    gy = np.exp(-((np.arange(wy) - (wy - 1) / 2.0) ** 2) / (2.0 * sigma * sigma))
    w = np.outer(gx, gy)
    return w / w.sum()


def ssim_mean(gt: np.ndarray, rec: np.ndarray) -> float:
    """Mean over frontal slices of windowed SSIM (11x11 Gaussian window, sigma 1.5).

    Assumes data scaled to [0, 1] (dynamic range 1).  Slices smaller than the
    window use a window truncated to the slice.
    """
    gt, rec = _check_pair(gt, rec)
    n1, n2, n3 = gt.shape
    window = _gaussian_window(min(_SSIM_WINDOW, n1), min(_SSIM_WINDOW, n2), _SSIM_SIGMA)
    c1 = _SSIM_K1 * _SSIM_K1
    c2 = _SSIM_K2 * _SSIM_K2
    vals = [
        kernels.ssim_slice(
            np.ascontiguousarray(gt[:, :, k]), np.ascontiguousarray(rec[:, :, k]), window, c1, c2
        )
        for k in range(n3)
    ]
    return float(np.mean(vals))


def uiqi_mean(gt: np.ndarray, rec: np.ndarray) -> float:
    """Mean over frontal slices of the universal quality index on sliding 8x8 windows."""
    gt, rec = _check_pair(gt, rec)
    n1, n2, n3 = gt.shape
    wx = min(_UIQI_WINDOW, n1)
    wy = min(_UIQI_WINDOW, n2)
    vals = [
        kernels.uiqi_slice(np.ascontiguousarray(gt[:, :, k]), np.ascontiguousarray(rec[:, :, k]), wx, wy)
        for k in range(n3)
    ]
    return float(np.mean(vals))


def sam_mean(gt: np.ndarray, rec: np.ndarray) -> float:
    """Mean spectral angle (radians) between corresponding mode-3 tubes.

    Positions where either tube is identically zero are skipped; if every
    position is skipped the angle is reported as 0.
    """
    gt, rec = _check_pair(gt, rec)
    n1, n2, n3 = gt.shape
    a = gt.reshape(n1 * n2, n3)
    b = rec.reshape(n1 * n2, n3)
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    valid = (na > 0.0) & (nb > 0.0)
    if not valid.any():
        return 0.0
    cosines = np.einsum("ij,ij->i", a[valid], b[valid]) / (na[valid] * nb[valid])
    return float(np.mean(np.arccos(np.clip(cosines, -1.0, 1.0))))


def rmse(gt: np.ndarray, rec: np.ndarray) -> float:
    """Root mean square error over all entries."""
    gt, rec = _check_pair(gt, rec)
    return float(np.sqrt(np.mean((rec - gt) ** 2)))


def mape(gt: np.ndarray, rec: np.ndarray) -> float:
    """Mean absolute percentage error (as a fraction) over entries with nonzero reference."""
    gt, rec = _check_pair(gt, rec)
    valid = gt != 0.0
    if not valid.any():
        raise MetricUndefinedError("MAPE is undefined: reference tensor is identically zero")
    return float(np.mean(np.abs(rec[valid] - gt[valid]) / np.abs(gt[valid])))


def dict_err(est: np.ndarray, gt: np.ndarray) -> float:
    """Mean matching error between estimated and reference dictionary atoms.

    Each estimated atom is matched to the reference atom with the largest
    absolute inner product (ties to the smallest index), so the score is
    invariant to column permutation and sign.  0 means perfect recovery.
    """
    est = np.asarray(est, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if est.ndim != 2 or est.shape != gt.shape:
        raise ShapeError(f"dictionary shapes differ: {est.shape} vs {gt.shape}")
    overlaps = np.abs(est.T @ gt)
    best = np.minimum(overlaps.max(axis=1), 1.0)
    return float(np.mean(1.0 - best))


def compute_metrics(
    gt: np.ndarray,
    rec: np.ndarray,
    peak: float = 1.0,
    dict_est: np.ndarray | None = None,
    dict_gt: np.ndarray | None = None,
) -> MetricsReport:
    """Evaluate all metrics of ``rec`` against ``gt`` and bundle them into a report."""
    slices = psnr_slices(gt, rec, peak)
    report = MetricsReport(
        psnr_slices=[float(v) for v in slices],
        psnr_mean=float(slices.mean()),
        ssim_mean=ssim_mean(gt, rec),
        uiqi_mean=uiqi_mean(gt, rec),
        sam_mean=sam_mean(gt, rec),
        rmse=rmse(gt, rec),
        mape=mape(gt, rec),
    )
    if dict_est is not None and dict_gt is not None:
        report.dict_err = dict_err(dict_est, dict_gt)
    return report
