"""Benchmark the JIT kernels against the pure-numpy fallbacks.

Times the four hot kernels on realistic shapes, reports speedups, and runs a
small end-to-end solve under the active dispatch (set DTNN_DISABLE_JIT=1 and
re-run to time the other path).  Also checks the atom-count scaling of the
solver: doubling the dictionary should roughly double the per-iteration cost.
"""

import time

import numpy as np

from dtnn import _kernels_numpy as knp
from dtnn import kernels
from dtnn.datagen import SynthSpec, random_mask, synth_low_rank_coded
from dtnn.solver import SolverConfig, solve

try:
    from dtnn import _kernels_numba as knb
except ImportError:
    knb = None


def timeit(fn, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_pair(name, np_fn, nb_fn, make_args):
    t_np = timeit(np_fn, *make_args())
    if nb_fn is None:
        print(f"{name:<28} numpy {t_np * 1e3:9.2f} ms   (numba unavailable)")
        return
    nb_fn(*make_args())  # compile
    t_nb = timeit(nb_fn, *make_args())
    print(f"{name:<28} numpy {t_np * 1e3:9.2f} ms   numba {t_nb * 1e3:9.2f} ms   {t_np / t_nb:6.1f}x")


def main():
    rng = np.random.default_rng(0)
    print(f"active dispatch: {'numba' if kernels.JIT_ENABLED else 'numpy'}\n")

    n1 = n2 = 40
    n3, d = 40, 200
    xu = rng.standard_normal((n3, n1 * n2))
    d0 = rng.standard_normal((n3, d))
    d0 /= np.linalg.norm(d0, axis=0)
    z0 = rng.standard_normal((d, n1 * n2))

    def sweep_args():
        d_mat, z3 = d0.copy(), z0.copy()
        return (xu, d_mat, z3, xu - d_mat @ z3, n1, n2, 10.0, 20.0, 1.0)

    bench_pair(
        f"atom_sweep {n1}x{n2}x{n3}, d={d}",
        knp.atom_sweep,
        knb.atom_sweep if knb else None,
        sweep_args,
    )

    values = rng.standard_normal((200 * 200, 50))
    observed = rng.random(values.shape) < 0.3

    def interp_args():
        return (values, observed, 0.0)

    bench_pair("interp_rows 200x200x50", knp.interp_rows, knb.interp_rows if knb else None, interp_args)

    x = rng.random((256, 256))
    y = rng.random((256, 256))
    bench_pair("uiqi_slice 256x256", knp.uiqi_slice, knb.uiqi_slice if knb else None, lambda: (x, y, 8, 8))

    g = np.exp(-((np.arange(11) - 5.0) ** 2) / (2 * 1.5**2))
    w = np.outer(g, g)
    w /= w.sum()
    bench_pair(
        "ssim_slice 256x256",
        knp.ssim_slice,
        knb.ssim_slice if knb else None,
        lambda: (x, y, w, 1e-4, 9e-4),
    )

    print("\nend-to-end solve (active dispatch):")
    spec = SynthSpec(dims=(30, 30, 30), d=90, slice_rank=3, seed=0)
    xt, _, _ = synth_low_rank_coded(spec)
    mask = random_mask(spec.dims, 0.5, seed=1)
    o = np.where(mask, xt, 0.0)

    def run_solve(atoms):
        cfg = SolverConfig(d=atoms, seed=0, max_iters=10, stop_tol=1e-12, warmup_iters=2)
        t0 = time.perf_counter()
        solve(o, mask, cfg)
        return time.perf_counter() - t0

    run_solve(90)  # warm caches
    t_d = min(run_solve(90) for _ in range(3))
    t_2d = min(run_solve(180) for _ in range(3))
    print(f"  10 iterations, d=90:  {t_d:.3f} s")
    print(f"  10 iterations, d=180: {t_2d:.3f} s   (scaling {t_2d / t_d:.2f}x for 2x atoms)")


if __name__ == "__main__":
    main()
