"""Kernel backend selection.

The compiled extension is preferred. Set ``MRMINSUM_BACKEND=python`` to force
the numpy fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

KERNEL_NAMES = (
    "masked_fan_out",
    "matrix_minus",
    "find_minima",
    "sign_reduce",
    "produce_new_matrix",
    "sum_vertical",
    "add_channel",
    "slicer",
    "syndrome_product",
    "mod2",
    "is_codeword_check",
)


def available_backends() -> list[str]:
    return ["compiled", "python"] if _kernels_c is not None else ["python"]


def get_backend(name: str | None = None) -> ModuleType:
    """Return the kernel module for ``name`` (``"compiled"``, ``"python"`` or None for default)."""
    if name is None:
        name = os.environ.get("MRMINSUM_BACKEND") or ("compiled" if _kernels_c is not None else "python")
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _kernels_c is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return _kernels_c
    raise ValueError(f"unknown kernel backend {name!r}")


def backend_name(module: ModuleType) -> str:
    return "compiled" if module is _kernels_c and module is not None else "python"


DEFAULT_BACKEND = backend_name(get_backend())
