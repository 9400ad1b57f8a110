import os
import subprocess
import sys

import numpy as np
import pytest

from dtnn import _kernels_numpy as knp

try:
    from dtnn import _kernels_numba as knb

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")


def _interp_case(seed):
    rng = np.random.default_rng(seed)
    values = rng.standard_normal((30, 12))
    observed = rng.random((30, 12)) < 0.5
    observed[0, :] = False  # an empty row
    observed[1, :] = True  # a full row
    return values, observed


@needs_numba
def test_interp_rows_paths_agree():
    values, observed = _interp_case(0)
    a = knp.interp_rows(values, observed, 0.25)
    b = knb.interp_rows(values, observed, 0.25)
    assert np.allclose(a, b, atol=1e-12)


@needs_numba
def test_atom_sweep_paths_agree():
    rng = np.random.default_rng(1)
    n1, n2, n3, d = 5, 4, 6, 7
    xu = rng.standard_normal((n3, n1 * n2))
    d_mat = rng.standard_normal((n3, d))
    d_mat /= np.linalg.norm(d_mat, axis=0)
    z3 = rng.standard_normal((d, n1 * n2))
    args = (10.0, 20.0, 1.0)

    d_a, z_a = d_mat.copy(), z3.copy()
    e_a = xu - d_a @ z_a
    nuc_a, deg_a = knp.atom_sweep(xu, d_a, z_a, e_a, n1, n2, *args)

    d_b, z_b = d_mat.copy(), z3.copy()
    e_b = xu - d_b @ z_b
    nuc_b, deg_b = knb.atom_sweep(xu, d_b, z_b, e_b, n1, n2, *args)

    assert np.allclose(d_a, d_b, atol=1e-10)
    assert np.allclose(z_a, z_b, atol=1e-10)
    assert np.allclose(e_a, e_b, atol=1e-10)
    assert abs(nuc_a - nuc_b) < 1e-10
    assert deg_a == deg_b


@needs_numba
def test_window_metrics_paths_agree():
    rng = np.random.default_rng(2)
    x = rng.random((20, 17))
    y = rng.random((20, 17))
    assert abs(knp.uiqi_slice(x, y, 8, 8) - knb.uiqi_slice(x, y, 8, 8)) < 1e-10
    w = np.outer(np.hanning(7) + 0.1, np.hanning(7) + 0.1)
    w /= w.sum()
    a = knp.ssim_slice(x, y, w, 1e-4, 9e-4)
    b = knb.ssim_slice(x, y, w, 1e-4, 9e-4)
    assert abs(a - b) < 1e-10


def test_interp_rows_semantics():
    values = np.array([[0.0, 99.0, 99.0, 3.0]])
    observed = np.array([[True, False, False, True]])
    out = knp.interp_rows(values, observed, 0.0)
    assert np.allclose(out, [[0.0, 1.0, 2.0, 3.0]])
    # empty row takes the fill value, edges clamp
    values = np.array([[5.0, 5.0, 5.0], [9.0, 1.0, 9.0]])
    observed = np.array([[False, False, False], [False, True, False]])
    out = knp.interp_rows(values, observed, -2.0)
    assert np.allclose(out[0], [-2.0, -2.0, -2.0])
    assert np.allclose(out[1], [1.0, 1.0, 1.0])


def _dispatch_mode(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("DTNN_DISABLE_JIT", None)
    else:
        env["DTNN_DISABLE_JIT"] = env_value
    code = "from dtnn import kernels; print(kernels.JIT_ENABLED)"
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    return out.stdout.strip()


def test_env_flag_selects_numpy_path():
    assert _dispatch_mode("1") == "False"


@needs_numba
def test_default_uses_jit():
    assert _dispatch_mode(None) == "True"
