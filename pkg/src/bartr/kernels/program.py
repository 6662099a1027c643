"""Flattened kernel programs and precomputed pairwise features.

Expression trees are compiled once into a postorder instruction list that
both gram engines (numpy and compiled) interpret identically. Pairwise
dot products and squared distances are computed once per point set and
reused across hyperparameter values during optimization.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .expr import RBF, KernelExpr, Linear, Product, Sum, WhiteNoise

OP_LIN = 0
OP_RBF = 1
OP_NOISE = 2
OP_ADD = 3
OP_MUL = 4

MAX_PARAMS = 16
MAX_STACK = 32


@dataclass(frozen=True)
class KernelProgram:
    opcodes: np.ndarray
    args: np.ndarray
    n_params: int


def _emit(expr: KernelExpr, ops: list[int], args: list[int], counter: list[int]) -> None:
    if isinstance(expr, Linear):
        ops.append(OP_LIN)
    elif isinstance(expr, RBF):
        ops.append(OP_RBF)
    elif isinstance(expr, WhiteNoise):
        ops.append(OP_NOISE)
    elif isinstance(expr, (Sum, Product)):
        children = expr.terms if isinstance(expr, Sum) else expr.factors
        for child in children:
            _emit(child, ops, args, counter)
        ops.append(OP_ADD if isinstance(expr, Sum) else OP_MUL)
        args.append(len(children))
        return
    else:
        raise TypeError(f"unknown kernel node {type(expr).__name__}")
    args.append(counter[0])
    counter[0] += 1


@lru_cache(maxsize=256)
def compile_kernel(expr: KernelExpr) -> KernelProgram:
    """Flatten a kernel tree to postorder instructions.

    Leaf hyperparameter slots are assigned left to right, matching the
    Hyperparams vector ordering.
    """
    ops: list[int] = []
    args: list[int] = []
    counter = [0]
    _emit(expr, ops, args, counter)
    if counter[0] > MAX_PARAMS:
        raise ValueError(f"kernel has {counter[0]} leaves; limit is {MAX_PARAMS}")
    opcodes = np.asarray(ops, dtype=np.int32)
    argarr = np.asarray(args, dtype=np.int32)
    opcodes.setflags(write=False)
    argarr.setflags(write=False)
    return KernelProgram(opcodes, argarr, counter[0])


@dataclass
class PairFeatures:
    """Pairwise dot products, squared distances, and same-index mask."""

    dots: np.ndarray  # (n, m) float64, C-contiguous
    sqd: np.ndarray  # (n, m) float64
    eye: np.ndarray  # (n, m) float64, 1.0 where same observation index
    symmetric: bool

    @classmethod
    def training(cls, X: np.ndarray) -> "PairFeatures":
        """Features of a training set against itself (noise on the diagonal)."""
        X = np.ascontiguousarray(X, dtype=float)
        dots = X @ X.T
        sq = np.diag(dots)
        sqd = np.maximum(sq[:, None] + sq[None, :] - 2.0 * dots, 0.0)
        return cls(
            np.ascontiguousarray(dots),
            np.ascontiguousarray(sqd),
            np.eye(len(X)),
            symmetric=True,
        )

    @classmethod
    def cross(cls, X1: np.ndarray, X2: np.ndarray) -> "PairFeatures":
        """Features between distinct index sets (noise never fires)."""
        X1 = np.ascontiguousarray(X1, dtype=float)
        X2 = np.ascontiguousarray(X2, dtype=float)
        dots = X1 @ X2.T
        sqd = np.maximum(
            (X1 * X1).sum(1)[:, None] + (X2 * X2).sum(1)[None, :] - 2.0 * dots, 0.0
        )
        return cls(
            np.ascontiguousarray(dots),
            np.ascontiguousarray(sqd),
            np.zeros_like(dots),
            symmetric=False,
        )

    @classmethod
    def diagonal(cls, X: np.ndarray) -> "PairFeatures":
        """Per-point self features as an (n, 1) column (noise fires)."""
        X = np.ascontiguousarray(X, dtype=float)
        dots = (X * X).sum(1)[:, None]
        return cls(
            np.ascontiguousarray(dots),
            np.zeros_like(dots),
            np.ones_like(dots),
            symmetric=False,
        )

    @classmethod
    def single_pair(cls, x1, x2, same_index: bool) -> "PairFeatures":
        a = np.asarray(x1, dtype=float).reshape(1, 3)
        b = np.asarray(x2, dtype=float).reshape(1, 3)
        dots = a @ b.T
        sqd = np.array([[float(((a - b) ** 2).sum())]])
        eye = np.array([[1.0 if same_index else 0.0]])
        return cls(dots, sqd, eye, symmetric=False)
