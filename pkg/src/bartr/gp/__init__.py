"""Gaussian-process regression and Laplace classification."""

from .classification import GPClassifier, fit_classifier, predict_classifier
from .metrics import classification_metrics, regression_metrics
from .optimize import FitReport
from .regression import GPRegressor, fit_regressor, nlml_regression, predict_regressor

__all__ = [
    "FitReport",
    "GPClassifier",
    "GPRegressor",
    "classification_metrics",
    "fit_classifier",
    "fit_regressor",
    "nlml_regression",
    "predict_classifier",
    "predict_regressor",
    "regression_metrics",
]
