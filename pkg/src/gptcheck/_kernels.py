"""Kernel selection: compiled extension when importable, numpy fallback otherwise."""

from __future__ import annotations

import os

from . import _simplex_py

python_kernel = _simplex_py

try:
    from . import _simplex as compiled_kernel
except ImportError:  # extension not built
    compiled_kernel = None

if compiled_kernel is not None and not os.environ.get("GPTCHECK_PURE_PYTHON"):
    simplex = compiled_kernel
    BACKEND = "compiled"
else:
    simplex = python_kernel
    BACKEND = "python"
