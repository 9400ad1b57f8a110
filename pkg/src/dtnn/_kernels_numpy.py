"""Pure-numpy implementations of the hot kernels.

These are the fallback path used when JIT compilation is disabled (see
:mod:`dtnn.kernels`) and the behavioral reference the numba versions are
tested against.  Signatures and semantics must stay in lockstep with
``_kernels_numba``.
"""

from __future__ import annotations

import numpy as np


def interp_rows(values: np.ndarray, observed: np.ndarray, fill_value: float) -> np.ndarray:
    """Linearly interpolate missing entries along each row.

    ``values`` is ``(rows, n)`` float64, ``observed`` a boolean array of the
    same shape.  Missing entries between observed neighbors are linearly
    interpolated; leading/trailing gaps take the nearest observed value; rows
    with no observed entry are filled with ``fill_value``.
    """
    out = values.copy()
    idx = np.arange(values.shape[1], dtype=np.float64)
    for r in range(values.shape[0]):
        obs = observed[r]
        if not obs.any():
            out[r, :] = fill_value
            continue
        if obs.all():
            continue
        out[r, ~obs] = np.interp(idx[~obs], idx[obs], values[r, obs])
    return out


def atom_sweep(xu, d_mat, z3, e, n1, n2, beta, rho_z, rho_d):
    """One pass of paired slice/atom updates over every dictionary atom.

    ``xu`` is the mode-3 unfolded data ``(n3, n1*n2)``; ``d_mat`` ``(n3, d)``
    the dictionary; ``z3`` ``(d, n1*n2)`` the unfolded coefficients (row i is
    the column-stacked i-th slice); ``e`` the maintained residual
    ``xu - d_mat @ z3``.  ``d_mat``, ``z3``, ``e`` are updated in place.
    Returns ``(sum of nuclear norms of the updated slices, degenerate atom
    count)``.
    """
    d = d_mat.shape[1]
    tau = 1.0 / (beta + rho_z)
    nuclear_sum = 0.0
    degenerate = 0
    for i in range(d):
        d_i = d_mat[:, i].copy()
        z_i = z3[i]
        # e becomes the leave-one-out residual R_i for atom i
        e += np.outer(d_i, z_i)
        g = d_i @ e
        m_vec = (rho_z * z_i + beta * g) * tau
        m = np.ascontiguousarray(m_vec.reshape(n2, n1).T)
        u, s, vt = np.linalg.svd(m, full_matrices=False)
        s = np.maximum(s - tau, 0.0)
        nuclear_sum += s.sum()
        z_new = (u * s) @ vt
        z_new_vec = z_new.T.copy().reshape(n1 * n2)
        v = beta * (e @ z_new_vec) + rho_d * d_i
        nv = np.sqrt(v @ v)
        if nv == 0.0:
            degenerate += 1
            d_new = d_i
        else:
            d_new = v / nv
        d_mat[:, i] = d_new
        z3[i] = z_new_vec
        e -= np.outer(d_new, z_new_vec)
    return nuclear_sum, degenerate


def uiqi_slice(x: np.ndarray, y: np.ndarray, wx: int, wy: int) -> float:
    """Mean universal quality index over all ``wx x wy`` sliding windows.

    Per window Q is the product correlation * luminance * contrast with each
    degenerate factor (zero denominator) replaced by its neutral value:
    luminance and contrast fall back to 1; correlation falls back to 1 when
    both windows are flat and 0 when exactly one is.
    """
    n = wx * wy
    xw = np.lib.stride_tricks.sliding_window_view(x, (wx, wy)).reshape(-1, n)
    yw = np.lib.stride_tricks.sliding_window_view(y, (wx, wy)).reshape(-1, n)
    mx = xw.mean(axis=1)
    my = yw.mean(axis=1)
    dx = xw - mx[:, None]
    dy = yw - my[:, None]
    sxx = np.einsum("ij,ij->i", dx, dx) / (n - 1)
    syy = np.einsum("ij,ij->i", dy, dy) / (n - 1)
    sxy = np.einsum("ij,ij->i", dx, dy) / (n - 1)

    var_prod = sxx * syy
    corr = np.where(var_prod > 0.0, sxy / np.sqrt(np.where(var_prod > 0.0, var_prod, 1.0)), 0.0)
    corr = np.where((sxx == 0.0) & (syy == 0.0), 1.0, corr)
    mu_den = mx * mx + my * my
    lum = np.where(mu_den > 0.0, 2.0 * mx * my / np.where(mu_den > 0.0, mu_den, 1.0), 1.0)
    s_den = sxx + syy
    con = np.where(
        s_den > 0.0, 2.0 * np.sqrt(np.where(var_prod > 0.0, var_prod, 0.0)) / np.where(s_den > 0.0, s_den, 1.0), 1.0
    )
    return float(np.mean(corr * lum * con))


def ssim_slice(x: np.ndarray, y: np.ndarray, window: np.ndarray, c1: float, c2: float) -> float:
    """Mean windowed structural similarity over valid window positions.

    ``window`` is a 2-D weight array summing to 1.  Local moments are
    window-weighted; the index combines luminance, contrast, and structure in
    the usual two-factor form.
    """
    wx, wy = window.shape
    w = window.reshape(-1)
    xw = np.lib.stride_tricks.sliding_window_view(x, (wx, wy)).reshape(-1, wx * wy)
    yw = np.lib.stride_tricks.sliding_window_view(y, (wx, wy)).reshape(-1, wx * wy)
    mu1 = xw @ w
    mu2 = yw @ w
    s11 = (xw * xw) @ w - mu1 * mu1
    s22 = (yw * yw) @ w - mu2 * mu2
    s12 = (xw * yw) @ w - mu1 * mu2
    num = (2.0 * mu1 * mu2 + c1) * (2.0 * s12 + c2)
    den = (mu1 * mu1 + mu2 * mu2 + c1) * (s11 + s22 + c2)
    return float(np.mean(num / den))
