"""Gram matrices, cross-covariances, and analytic gradients for kernel
expressions over workspace points."""

from __future__ import annotations

import numpy as np

from ..errors import NumericError
from ..workspace import Point3, points_to_array
from . import engine
from .expr import Hyperparams, KernelExpr, check_arity
from .program import PairFeatures, compile_kernel


def _check_finite(K: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(K)):
        i, j = np.argwhere(~np.isfinite(np.atleast_2d(K)))[0]
        raise NumericError(f"non-finite {what} entry at pair ({i}, {j})")
    return K


def eval_pair(
    kernel: KernelExpr,
    theta: Hyperparams,
    x1,
    x2,
    same_index: bool | None = None,
) -> float:
    """Covariance between two points.

    WhiteNoise leaves contribute only when both arguments are the same
    observation; by default that is taken as coordinate equality.
    """
    check_arity(kernel, theta)
    if same_index is None:
        a, b = points_to_array([x1])[0], points_to_array([x2])[0]
        same_index = bool(np.array_equal(a, b))
    feats = PairFeatures.single_pair(
        points_to_array([x1])[0], points_to_array([x2])[0], same_index
    )
    K = engine.evaluate(compile_kernel(kernel), theta.values, feats)
    return float(_check_finite(K, "covariance")[0, 0])


def gram(kernel: KernelExpr, theta: Hyperparams, X) -> np.ndarray:
    """Training Gram matrix; WhiteNoise contributes to the diagonal only."""
    check_arity(kernel, theta)
    feats = PairFeatures.training(points_to_array(X))
    return _check_finite(
        engine.evaluate(compile_kernel(kernel), theta.values, feats), "gram"
    )


def gram_with_gradients(
    kernel: KernelExpr, theta: Hyperparams, X
) -> tuple[np.ndarray, np.ndarray]:
    """Gram matrix and d K / d log(theta_p), one matrix per hyperparameter."""
    check_arity(kernel, theta)
    feats = PairFeatures.training(points_to_array(X))
    K, G = engine.evaluate(compile_kernel(kernel), theta.values, feats, want_grads=True)
    _check_finite(K, "gram")
    _check_finite(G, "gram gradient")
    return K, G


def cross_gram(kernel: KernelExpr, theta: Hyperparams, X1, X2) -> np.ndarray:
    """Covariance between two distinct point sets (noise never fires)."""
    check_arity(kernel, theta)
    feats = PairFeatures.cross(points_to_array(X1), points_to_array(X2))
    return _check_finite(
        engine.evaluate(compile_kernel(kernel), theta.values, feats), "cross gram"
    )


def gram_diag(kernel: KernelExpr, theta: Hyperparams, X) -> np.ndarray:
    """Per-point prior variances k(x, x), including noise terms."""
    check_arity(kernel, theta)
    feats = PairFeatures.diagonal(points_to_array(X))
    K = engine.evaluate(compile_kernel(kernel), theta.values, feats)
    return _check_finite(K, "diag")[:, 0].copy()


class BoundKernel:
    """A kernel pinned to a training set, with cached pairwise features.

    Lets hyperparameter optimization re-evaluate the Gram matrix and its
    gradients at many theta values without recomputing distances.
    """

    def __init__(self, kernel: KernelExpr, X):
        self.kernel = kernel
        self.X = points_to_array(X)
        self.program = compile_kernel(kernel)
        self._train_feats = PairFeatures.training(self.X) if len(self.X) else None

    @property
    def n(self) -> int:
        return len(self.X)

    def gram(self, values: np.ndarray) -> np.ndarray:
        return _check_finite(
            engine.evaluate(self.program, values, self._train_feats), "gram"
        )

    def gram_grads(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        K, G = engine.evaluate(
            self.program, values, self._train_feats, want_grads=True
        )
        return _check_finite(K, "gram"), G

    def cross(self, values: np.ndarray, Xs: np.ndarray) -> np.ndarray:
        feats = PairFeatures.cross(self.X, np.asarray(Xs, dtype=float))
        return _check_finite(engine.evaluate(self.program, values, feats), "cross gram")

    def diag(self, values: np.ndarray, Xs: np.ndarray) -> np.ndarray:
        feats = PairFeatures.diagonal(np.asarray(Xs, dtype=float))
        K = engine.evaluate(self.program, values, feats)
        return _check_finite(K, "diag")[:, 0].copy()
