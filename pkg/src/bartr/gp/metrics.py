"""Held-out evaluation metrics for the fitted models."""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from ..workspace import points_to_array

_EPS = 1e-15


def classification_metrics(model, Xs, labels) -> tuple[float, float]:
    """(accuracy, mean negative log likelihood) on labeled points.

    Threshold is 0.5 with ties going to class +1.
    """
    labels = np.asarray(labels, dtype=float).reshape(-1)
    if labels.size == 0:
        raise ValidationError("evaluation set is empty")
    p = model.predict(points_to_array(Xs))
    pred = np.where(p >= 0.5, 1.0, -1.0)
    acc = float((pred == labels).mean())
    p_true = np.where(labels > 0, p, 1.0 - p)
    nll = float(-np.log(np.clip(p_true, _EPS, None)).mean())
    return acc, nll


def regression_metrics(model, Xs, y) -> tuple[float, float]:
    """(mean squared error, maximum absolute error) in seconds."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size == 0:
        raise ValidationError("evaluation set is empty")
    mean, _ = model.predict(points_to_array(Xs))
    err = mean - y
    return float((err * err).mean()), float(np.abs(err).max())
