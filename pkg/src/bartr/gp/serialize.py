"""Stable digests of training data for model cache validation."""

from __future__ import annotations

import hashlib

import numpy as np


def data_digest(X: np.ndarray, y: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(np.round(X, 10)).tobytes())
    h.update(np.ascontiguousarray(np.round(y, 10)).tobytes())
    return h.hexdigest()[:16]
