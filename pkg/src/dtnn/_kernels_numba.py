"""JIT-compiled implementations of the hot kernels.

Mirrors ``_kernels_numpy`` function for function; see that module for the
semantic contracts.  Importing this module requires numba.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def interp_rows(values, observed, fill_value):
    rows, n = values.shape
    out = values.copy()
    for r in range(rows):
        first = -1
        for j in range(n):
            if observed[r, j]:
                first = j
                break
        if first < 0:
            for j in range(n):
                out[r, j] = fill_value
            continue
        last = first
        for j in range(n - 1, first - 1, -1):
            if observed[r, j]:
                last = j
                break
        for j in range(first):
            out[r, j] = values[r, first]
        for j in range(last + 1, n):
            out[r, j] = values[r, last]
        left = first
        j = first + 1
        while j <= last:
            if observed[r, j]:
                left = j
                j += 1
            else:
                right = j + 1
                while not observed[r, right]:
                    right += 1
                fl = values[r, left]
                slope = (values[r, right] - fl) / (right - left)
                for q in range(j, right):
                    out[r, q] = slope * (q - left) + fl
                left = right
                j = right + 1
    return out


@njit(cache=True)
def atom_sweep(xu, d_mat, z3, e, n1, n2, beta, rho_z, rho_d):
    n3, d = d_mat.shape
    p = n1 * n2
    tau = 1.0 / (beta + rho_z)
    nuclear_sum = 0.0
    degenerate = 0
    d_i = np.empty(n3)
    m = np.empty((n1, n2))
    znv = np.empty(p)
    for i in range(d):
        for a in range(n3):
            d_i[a] = d_mat[a, i]
        z_i = z3[i]
        # e becomes the leave-one-out residual R_i for atom i
        for a in range(n3):
            da = d_i[a]
            for b in range(p):
                e[a, b] += da * z_i[b]
        g = np.dot(d_i, e)
        for jj in range(n2):
            base = jj * n1
            for ii in range(n1):
                m[ii, jj] = (rho_z * z_i[base + ii] + beta * g[base + ii]) * tau
        u, s, vt = np.linalg.svd(m, full_matrices=False)
        for k in range(s.shape[0]):
            sv = s[k] - tau
            s[k] = sv if sv > 0.0 else 0.0
            nuclear_sum += s[k]
        z_new = np.dot(u * s, vt)
        for jj in range(n2):
            base = jj * n1
            for ii in range(n1):
                znv[base + ii] = z_new[ii, jj]
        v = beta * np.dot(e, znv)
        for a in range(n3):
            v[a] += rho_d * d_i[a]
        nv = np.sqrt(np.dot(v, v))
        if nv == 0.0:
            degenerate += 1
            for a in range(n3):
                v[a] = d_i[a]
        else:
            for a in range(n3):
                v[a] /= nv
        for a in range(n3):
            da = v[a]
            d_mat[a, i] = da
            for b in range(p):
                e[a, b] -= da * znv[b]
        for b in range(p):
            z3[i, b] = znv[b]
    return nuclear_sum, degenerate


@njit(cache=True)
def uiqi_slice(x, y, wx, wy):
    n1, n2 = x.shape
    nox = n1 - wx + 1
    noy = n2 - wy + 1
    n = wx * wy
    nvar = n - 1 if n > 1 else 1
    total = 0.0
    for ox in range(nox):
        for oy in range(noy):
            sx = 0.0
            sy = 0.0
            for a in range(wx):
                for b in range(wy):
                    sx += x[ox + a, oy + b]
                    sy += y[ox + a, oy + b]
            mx = sx / n
            my = sy / n
            sxx = 0.0
            syy = 0.0
            sxy = 0.0
            for a in range(wx):
                for b in range(wy):
                    dx = x[ox + a, oy + b] - mx
                    dy = y[ox + a, oy + b] - my
                    sxx += dx * dx
                    syy += dy * dy
                    sxy += dx * dy
            sxx /= nvar
            syy /= nvar
            sxy /= nvar
            var_prod = sxx * syy
            if var_prod > 0.0:
                corr = sxy / np.sqrt(var_prod)
            elif sxx == 0.0 and syy == 0.0:
                corr = 1.0
            else:
                corr = 0.0
            mu_den = mx * mx + my * my
            lum = 2.0 * mx * my / mu_den if mu_den > 0.0 else 1.0
            s_den = sxx + syy
            if s_den > 0.0:
                con = 2.0 * np.sqrt(var_prod if var_prod > 0.0 else 0.0) / s_den
            else:
                con = 1.0
            total += corr * lum * con
    return total / (nox * noy)


@njit(cache=True)
def ssim_slice(x, y, window, c1, c2):
    n1, n2 = x.shape
    wx, wy = window.shape
    nox = n1 - wx + 1
    noy = n2 - wy + 1
    total = 0.0
    for ox in range(nox):
        for oy in range(noy):
            mu1 = 0.0
            mu2 = 0.0
            m11 = 0.0
            m22 = 0.0
            m12 = 0.0
            for a in range(wx):
                for b in range(wy):
                    w = window[a, b]
                    xv = x[ox + a, oy + b]
                    yv = y[ox + a, oy + b]
                    mu1 += w * xv
                    mu2 += w * yv
                    m11 += w * xv * xv
                    m22 += w * yv * yv
                    m12 += w * xv * yv
            s11 = m11 - mu1 * mu1
            s22 = m22 - mu2 * mu2
            s12 = m12 - mu1 * mu2
            num = (2.0 * mu1 * mu2 + c1) * (2.0 * s12 + c2)
            den = (mu1 * mu1 + mu2 * mu2 + c1) * (s11 + s22 + c2)
            total += num / den
    return total / (nox * noy)
