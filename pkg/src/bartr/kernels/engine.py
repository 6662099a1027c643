"""Gram-engine backend selection.

The compiled extension is preferred when importable; the numpy engine is
the fallback. Set BARTR_KERNEL_BACKEND=python or =compiled to force one
(=compiled raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _engine_py

_requested = os.environ.get("BARTR_KERNEL_BACKEND", "auto")

if _requested not in ("auto", "compiled", "python"):
    raise ValueError(
        f"BARTR_KERNEL_BACKEND must be auto, compiled, or python (got {_requested!r})"
    )

if _requested == "python":
    _impl = _engine_py
else:
    try:
        from . import _engine_c as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _engine_py


def backend_name() -> str:
    """Which engine is active: "compiled" or "python"."""
    return _impl.BACKEND


def evaluate(program, theta, feats, want_grads=False):
    return _impl.evaluate(program, theta, feats, want_grads)
