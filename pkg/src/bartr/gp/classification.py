"""Binary GP classification with the Laplace approximation.

Likelihood is the logistic sigmoid over labels in {-1, +1}. The posterior
mode is found by Newton iteration; the evidence and its hyperparameter
gradient use the standard Laplace expressions, and predictions use the
probit approximation to the logistic-Gaussian integral.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import expit

from ..errors import ConvergenceError, StateError, ValidationError
from ..kernels import BoundKernel, Hyperparams, KernelExpr, check_arity
from ..workspace import points_to_array
from .linalg import JITTER, chol_solve, chol_with_jitter
from .optimize import RESTARTS, FitReport, minimize_restarts

NEWTON_MAX_ITER = 100
# Newton is quadratic, so a tight tolerance costs about one extra sweep
# and keeps the evidence gradient accurate; the mode-stationarity
# contract only needs 1e-6.
NEWTON_TOL = 1e-10

_PROB_EPS = 1e-12


def _log_sigmoid_likelihood(y: np.ndarray, f: np.ndarray) -> float:
    return float(-np.logaddexp(0.0, -y * f).sum())


def _find_mode(K: np.ndarray, y: np.ndarray):
    """Newton iteration to the mode of the penalized log-likelihood.

    Returns (f_hat, a) with a = K^-1 f_hat. Deterministic: always starts
    from f = 0.
    """
    n = len(y)
    t = (y + 1.0) / 2.0
    f = np.zeros(n)
    a = np.zeros(n)
    idx = np.arange(n)
    for _ in range(NEWTON_MAX_ITER):
        prob = expit(f)
        grad = t - prob
        if np.max(np.abs(grad - a)) < NEWTON_TOL:
            return f, a
        W = prob * (1.0 - prob)
        sqW = np.sqrt(W)
        B = sqW[:, None] * K * sqW[None, :]
        B[idx, idx] += 1.0
        L = np.linalg.cholesky(B)
        b = W * f + grad
        a = b - sqW * chol_solve(L, sqW * (K @ b))
        f = K @ a
    grad_norm = float(np.max(np.abs((t - expit(f)) - a)))
    raise ConvergenceError(
        f"Newton mode finding did not reach tol {NEWTON_TOL:g} in "
        f"{NEWTON_MAX_ITER} iterations",
        best=f,
        diagnostics={"grad_norm": grad_norm, "iterations": NEWTON_MAX_ITER},
    )


class GPClassifier:
    """Laplace-approximate GP binary classifier."""

    def __init__(self, kernel: KernelExpr, theta: Hyperparams | None = None,
                 X=None, labels=None):
        self.kernel = kernel
        self.theta = theta
        self.X = points_to_array(X) if X is not None else np.empty((0, 3))
        self.y = (
            np.asarray(labels, dtype=float).reshape(-1)
            if labels is not None
            else np.empty(0)
        )
        if len(self.X) != len(self.y):
            raise ValidationError(f"{len(self.X)} inputs but {len(self.y)} labels")
        if not np.all(np.isin(self.y, (-1.0, 1.0))):
            raise ValidationError("labels must be -1 or +1")
        self._bound: BoundKernel | None = None
        self.f_hat = None
        if theta is not None:
            check_arity(kernel, theta)
            self._laplace()

    @property
    def fitted(self) -> bool:
        return self.theta is not None

    @property
    def degenerate_labels(self) -> bool:
        return len(np.unique(self.y)) < 2

    def _laplace(self) -> None:
        self._bound = BoundKernel(self.kernel, self.X)
        K = self._bound.gram(self.theta.values)
        idx = np.arange(len(self.X))
        K[idx, idx] += JITTER
        self._K = K
        self.f_hat, self._a = _find_mode(K, self.y)
        prob = expit(self.f_hat)
        self._t = (self.y + 1.0) / 2.0
        self._grad = self._t - prob
        self._W = prob * (1.0 - prob)
        self._sqW = np.sqrt(self._W)
        B = self._sqW[:, None] * K * self._sqW[None, :]
        B[idx, idx] += 1.0
        self._L = np.linalg.cholesky(B)
        self._nlml = float(
            0.5 * self._a @ self.f_hat
            - _log_sigmoid_likelihood(self.y, self.f_hat)
            + np.log(np.diag(self._L)).sum()
        )

    def _require_fitted(self) -> None:
        if not self.fitted:
            raise StateError("classifier has no hyperparameters; fit it first")

    def predict(self, Xs) -> np.ndarray:
        """P(label = +1) per query point."""
        self._require_fitted()
        Xs = points_to_array(Xs)
        values = self.theta.values
        kss = self._bound.diag(values, Xs)
        Ks = self._bound.cross(values, Xs)
        f_star = Ks.T @ self._grad
        v = solve_triangular(self._L, self._sqW[:, None] * Ks, lower=True)
        var = kss - (v * v).sum(axis=0)
        if np.any(var < -1e-8):
            warnings.warn(
                f"latent variance fell below -1e-8 (min {var.min():.3e}); clamping",
                RuntimeWarning,
                stacklevel=2,
            )
        var = np.maximum(var, 0.0)
        kappa = 1.0 / np.sqrt(1.0 + np.pi * var / 8.0)
        return np.clip(expit(kappa * f_star), _PROB_EPS, 1.0 - _PROB_EPS)

    def latent(self, Xs) -> tuple[np.ndarray, np.ndarray]:
        """Laplace latent marginal (mean, variance) per query point."""
        self._require_fitted()
        Xs = points_to_array(Xs)
        values = self.theta.values
        kss = self._bound.diag(values, Xs)
        Ks = self._bound.cross(values, Xs)
        f_star = Ks.T @ self._grad
        v = solve_triangular(self._L, self._sqW[:, None] * Ks, lower=True)
        return f_star, np.maximum(kss - (v * v).sum(axis=0), 0.0)

    def nlml(self) -> float:
        """Laplace-approximate negative log marginal likelihood."""
        self._require_fitted()
        return self._nlml

    def to_json(self) -> dict:
        from ..kernels import format_kernel
        from .serialize import data_digest

        self._require_fitted()
        return {
            "model": "classifier",
            "kernel": format_kernel(self.kernel),
            "log_theta": [float(v) for v in self.theta.log],
            "n": len(self.X),
            "data_digest": data_digest(self.X, self.y),
        }


def _laplace_nlml_and_grad(bound: BoundKernel, y: np.ndarray, log_theta: np.ndarray):
    values = np.exp(log_theta)
    K, G = bound.gram_grads(values)
    n = K.shape[0]
    idx = np.arange(n)
    K[idx, idx] += JITTER
    f, a = _find_mode(K, y)
    t = (y + 1.0) / 2.0
    prob = expit(f)
    grad_ll = t - prob
    W = prob * (1.0 - prob)
    sqW = np.sqrt(W)
    B = sqW[:, None] * K * sqW[None, :]
    B[idx, idx] += 1.0
    L = np.linalg.cholesky(B)
    nlml = (
        0.5 * a @ f
        - _log_sigmoid_likelihood(y, f)
        + np.log(np.diag(L)).sum()
    )
    # Implicit-derivative terms: R = W^1/2 B^-1 W^1/2, C = L^-1 W^1/2 K.
    R = sqW[:, None] * chol_solve(L, np.diag(sqW))
    C = solve_triangular(L, sqW[:, None] * K, lower=True)
    d3 = -prob * (1.0 - prob) * (1.0 - 2.0 * prob)
    s2 = 0.5 * (np.diag(K) - (C * C).sum(axis=0)) * d3
    grad = np.empty(len(values))
    for p in range(len(values)):
        Cj = G[p]
        s1 = 0.5 * (a @ Cj @ a) - 0.5 * (R * Cj).sum()
        bvec = Cj @ grad_ll
        s3 = bvec - K @ (R @ bvec)
        grad[p] = -(s1 + s2 @ s3)
    return float(nlml), grad


def fit_classifier(
    X, labels, kernel: KernelExpr, seed: int, restarts: int = RESTARTS
) -> tuple[GPClassifier, FitReport]:
    """Learn hyperparameters by Laplace-evidence minimization."""
    X = points_to_array(X)
    y = np.asarray(labels, dtype=float).reshape(-1)
    if len(X) < 2:
        raise ValidationError(f"need at least 2 training points (got {len(X)})")
    if len(X) != len(y):
        raise ValidationError(f"{len(X)} inputs but {len(y)} labels")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValidationError("labels must be -1 or +1")
    degenerate = len(np.unique(y)) < 2
    if degenerate:
        warnings.warn(
            "training labels are single-class; fit proceeds but is degenerate",
            RuntimeWarning,
            stacklevel=2,
        )
    bound = BoundKernel(kernel, X)

    def objective(log_theta):
        return _laplace_nlml_and_grad(bound, y, log_theta)

    best_log, report = minimize_restarts(objective, kernel.n_params, seed, restarts)
    model = GPClassifier(kernel, Hyperparams(best_log), X, y)
    report.nlml = model.nlml()
    report.degenerate_labels = degenerate
    return model, report


def predict_classifier(model: GPClassifier, Xs) -> np.ndarray:
    return model.predict(Xs)
