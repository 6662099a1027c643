"""Shared dense linear algebra helpers for the GP models."""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_solve, cholesky

from ..errors import NumericError

JITTER = 1e-8
_JITTER_LADDER = (JITTER, 1e-6, 1e-4, 1e-2)


def chol_with_jitter(K: np.ndarray, escalate: bool = True):
    """Lower Cholesky factor of K + jitter*I.

    The base jitter is always applied. If the factorization fails and
    escalate is set, the jitter grows by factors of 100 up to 1e-2 before
    giving up with a NumericError.
    """
    ladder = _JITTER_LADDER if escalate else (JITTER,)
    n = K.shape[0]
    idx = np.arange(n)
    for jitter in ladder:
        Kj = K.copy()
        Kj[idx, idx] += jitter
        try:
            return cholesky(Kj, lower=True), jitter
        except np.linalg.LinAlgError:
            continue
    raise NumericError(
        f"covariance matrix is not positive definite after jitter {ladder[-1]:g}"
    )


def chol_solve(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    return cho_solve((L, True), b)
