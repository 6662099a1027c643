"""Composable covariance kernels and their gram engines."""

from .api import (
    BoundKernel,
    cross_gram,
    eval_pair,
    gram,
    gram_diag,
    gram_with_gradients,
)
from .engine import backend_name
from .expr import (
    RBF,
    Candidate,
    Hyperparams,
    KernelExpr,
    Linear,
    Product,
    Sum,
    WhiteNoise,
    candidate_by_name,
    check_arity,
    enumerate_candidate_kernels,
    format_kernel,
)

__all__ = [
    "BoundKernel",
    "Candidate",
    "Hyperparams",
    "KernelExpr",
    "Linear",
    "Product",
    "RBF",
    "Sum",
    "WhiteNoise",
    "backend_name",
    "candidate_by_name",
    "check_arity",
    "cross_gram",
    "enumerate_candidate_kernels",
    "eval_pair",
    "format_kernel",
    "gram",
    "gram_diag",
    "gram_with_gradients",
]
