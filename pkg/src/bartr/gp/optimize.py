"""Restart-driven marginal-likelihood minimization.

All hyperparameters are optimized in log-space, unconstrained except for
wide numeric guard bounds. Each fit draws its restart points from a
seeded generator, so fits are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..errors import ConvergenceError, NumericError

RESTARTS = 5
RESTART_LOW = -2.0
RESTART_HIGH = 2.0
# Guard bounds keep exp(theta) inside a sane floating range.
LOG_BOUNDS = (-8.0, 8.0)
_PENALTY = 1e25


@dataclass
class FitReport:
    """Outcome of one hyperparameter fit."""

    nlml: float
    iterations: int
    restarts: int
    converged: bool
    degenerate_labels: bool = False

    def to_json(self) -> dict:
        return {
            "nlml": self.nlml,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "converged": self.converged,
            "degenerate_labels": self.degenerate_labels,
        }


def minimize_restarts(
    objective,
    n_params: int,
    seed: int,
    restarts: int = RESTARTS,
    maxiter: int = 100,
):
    """Minimize objective(log_theta) -> (value, grad) over several restarts.

    Returns (best_log_theta, FitReport). Raises ConvergenceError, carrying
    the best iterate seen, if no restart produces a finite objective.
    """
    rng = np.random.default_rng(seed)
    best_seen: tuple[np.ndarray, float] | None = None

    def guarded(x):
        nonlocal best_seen
        try:
            val, grad = objective(x)
        except (NumericError, np.linalg.LinAlgError):
            return _PENALTY, np.zeros_like(x)
        if not np.isfinite(val) or not np.all(np.isfinite(grad)):
            return _PENALTY, np.zeros_like(x)
        if best_seen is None or val < best_seen[1]:
            best_seen = (x.copy(), val)
        return val, grad

    best = None
    total_iters = 0
    for _ in range(restarts):
        x0 = rng.uniform(RESTART_LOW, RESTART_HIGH, n_params)
        res = minimize(
            guarded,
            x0,
            jac=True,
            method="L-BFGS-B",
            bounds=[LOG_BOUNDS] * n_params,
            options={"maxiter": maxiter, "ftol": 1e-10, "gtol": 1e-6},
        )
        total_iters += int(res.nit)
        if np.isfinite(res.fun) and res.fun < _PENALTY:
            if best is None or res.fun < best[1]:
                best = (res.x.copy(), float(res.fun), bool(res.success))
    if best is None:
        raise ConvergenceError(
            f"all {restarts} restarts diverged",
            best=best_seen,
            diagnostics={"restarts": restarts, "iterations": total_iters},
        )
    x, fun, ok = best
    return x, FitReport(nlml=fun, iterations=total_iters, restarts=restarts, converged=ok)
