"""Backend selection for the hot loops.

The compiled extension is preferred; set ``TWODEL_PURE_PYTHON=1`` to force the
pure-Python implementation (used by the benchmark and the parity tests).
"""
from __future__ import annotations

import os

from twodel import _kernels_py

if os.environ.get("TWODEL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from twodel import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

greedy_coloring = _impl.greedy_coloring
ct2_member = _impl.ct2_member
ct2_count = _impl.ct2_count
ct2_batch = _impl.ct2_batch

__all__ = ["BACKEND", "greedy_coloring", "ct2_member", "ct2_count", "ct2_batch"]
