"""Third-order tensor completion with a learned mode-3 dictionary and low-rank coding.

Submodules are imported lazily so the CLI can configure thread environment
variables before numpy loads.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = (
    "baseline",
    "cli",
    "datagen",
    "errors",
    "io_formats",
    "kernels",
    "linalg",
    "metrics",
    "solver",
    "spectral",
    "tensor3",
)

__all__ = list(_SUBMODULES)


def __getattr__(name):
    if name in _SUBMODULES:
        module = importlib.import_module(f".{name}", __name__)
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(_SUBMODULES))
