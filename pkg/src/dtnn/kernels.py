"""Kernel dispatch: numba-compiled fast path with a pure-numpy fallback.

Set the environment variable ``DTNN_DISABLE_JIT=1`` (before import) to force
the numpy path; it is also selected automatically when numba is missing.
``benchmarks/bench.py`` times the two paths against each other.
"""

from __future__ import annotations

import os


def _jit_disabled() -> bool:
    return os.environ.get("DTNN_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}


if _jit_disabled():
    from . import _kernels_numpy as _impl

    JIT_ENABLED = False
else:
    try:
        from . import _kernels_numba as _impl  # type: ignore[no-redef]

        JIT_ENABLED = True
    except ImportError:
        from . import _kernels_numpy as _impl  # type: ignore[no-redef]

        JIT_ENABLED = False

interp_rows = _impl.interp_rows
atom_sweep = _impl.atom_sweep
uiqi_slice = _impl.uiqi_slice
ssim_slice = _impl.ssim_slice
