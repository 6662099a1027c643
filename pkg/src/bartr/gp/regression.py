"""Exact Gaussian-process regression on centered targets.

The model is a zero-mean GP over target deviations from the training
mean; the mean is added back at prediction time. Predicted variances are
observation variances: the prior diagonal includes any noise leaves.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.linalg import solve_triangular

from ..errors import StateError, ValidationError
from ..kernels import BoundKernel, Hyperparams, KernelExpr, check_arity
from ..workspace import points_to_array
from .linalg import JITTER, chol_solve, chol_with_jitter
from .optimize import RESTARTS, FitReport, minimize_restarts

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class GPRegressor:
    """A GP regressor pinned to a kernel, hyperparameters, and data.

    Constructing with explicit hyperparameters factorizes immediately;
    use fit_regressor to learn hyperparameters from data.
    """

    def __init__(self, kernel: KernelExpr, theta: Hyperparams | None = None,
                 X=None, y=None):
        self.kernel = kernel
        self.theta = theta
        self.X = points_to_array(X) if X is not None else np.empty((0, 3))
        self.y = np.asarray(y, dtype=float).reshape(-1) if y is not None else np.empty(0)
        if len(self.X) != len(self.y):
            raise ValidationError(
                f"{len(self.X)} inputs but {len(self.y)} targets"
            )
        if not np.all(np.isfinite(self.y)):
            raise ValidationError("targets must be finite")
        self._bound: BoundKernel | None = None
        self._L = None
        self._alpha = None
        self._nlml = None
        self.y_mean = 0.0
        if theta is not None:
            check_arity(kernel, theta)
            self._factorize()

    @property
    def fitted(self) -> bool:
        return self.theta is not None

    def _factorize(self) -> None:
        self._bound = BoundKernel(self.kernel, self.X)
        n = len(self.X)
        self.y_mean = float(self.y.mean()) if n else 0.0
        if n == 0:
            self._nlml = 0.0
            return
        yc = self.y - self.y_mean
        K = self._bound.gram(self.theta.values)
        self._L, self._jitter = chol_with_jitter(K)
        self._alpha = chol_solve(self._L, yc)
        self._nlml = float(
            0.5 * yc @ self._alpha
            + np.log(np.diag(self._L)).sum()
            + n * _HALF_LOG_2PI
        )

    def _require_fitted(self) -> None:
        if not self.fitted:
            raise StateError("regressor has no hyperparameters; fit it first")

    def predict(self, Xs) -> tuple[np.ndarray, np.ndarray]:
        """Posterior (mean, variance) per query point."""
        self._require_fitted()
        Xs = points_to_array(Xs)
        values = self.theta.values
        kss = self._bound.diag(values, Xs)
        if len(self.X) == 0:
            return np.full(len(Xs), self.y_mean), kss
        Ks = self._bound.cross(values, Xs)
        mean = self.y_mean + Ks.T @ self._alpha
        v = solve_triangular(self._L, Ks, lower=True)
        var = kss - (v * v).sum(axis=0)
        if np.any(var < -1e-8):
            warnings.warn(
                f"posterior variance fell below -1e-8 (min {var.min():.3e}); clamping",
                RuntimeWarning,
                stacklevel=2,
            )
        return mean, np.maximum(var, 0.0)

    def nlml(self) -> float:
        """Negative log marginal likelihood of the training targets."""
        self._require_fitted()
        return self._nlml

    def to_json(self) -> dict:
        from ..kernels import format_kernel
        from .serialize import data_digest

        self._require_fitted()
        return {
            "model": "regressor",
            "kernel": format_kernel(self.kernel),
            "log_theta": [float(v) for v in self.theta.log],
            "n": len(self.X),
            "data_digest": data_digest(self.X, self.y),
        }


def _nlml_and_grad(bound: BoundKernel, yc: np.ndarray, log_theta: np.ndarray):
    values = np.exp(log_theta)
    K, G = bound.gram_grads(values)
    n = K.shape[0]
    idx = np.arange(n)
    K[idx, idx] += JITTER
    L = np.linalg.cholesky(K)
    alpha = chol_solve(L, yc)
    nlml = 0.5 * yc @ alpha + np.log(np.diag(L)).sum() + n * _HALF_LOG_2PI
    Kinv = chol_solve(L, np.eye(n))
    Ga = G @ alpha
    grad = 0.5 * ((G * Kinv).sum(axis=(1, 2)) - Ga @ alpha)
    return float(nlml), grad


def fit_regressor(
    X, y, kernel: KernelExpr, seed: int, restarts: int = RESTARTS
) -> tuple[GPRegressor, FitReport]:
    """Learn hyperparameters by NLML minimization with random restarts."""
    X = points_to_array(X)
    y = np.asarray(y, dtype=float).reshape(-1)
    if len(X) < 2:
        raise ValidationError(f"need at least 2 training points (got {len(X)})")
    if len(X) != len(y):
        raise ValidationError(f"{len(X)} inputs but {len(y)} targets")
    if not np.all(np.isfinite(y)):
        raise ValidationError("targets must be finite")
    bound = BoundKernel(kernel, X)
    yc = y - y.mean()

    def objective(log_theta):
        return _nlml_and_grad(bound, yc, log_theta)

    best_log, report = minimize_restarts(objective, kernel.n_params, seed, restarts)
    model = GPRegressor(kernel, Hyperparams(best_log), X, y)
    report.nlml = model.nlml()
    return model, report


def predict_regressor(model: GPRegressor, Xs) -> tuple[np.ndarray, np.ndarray]:
    return model.predict(Xs)


def nlml_regression(model: GPRegressor) -> float:
    return model.nlml()
