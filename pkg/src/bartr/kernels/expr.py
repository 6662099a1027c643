"""Composable covariance expressions and their hyperparameter vectors.

A kernel is a finite tree of Linear, RBF, and WhiteNoise leaves combined
by Sum and Product nodes. Every leaf owns exactly one positive
hyperparameter; the hyperparameter vector is ordered by the leaves'
left-to-right position in the tree and is stored in log-space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from ..errors import StructuralError, ValidationError


class KernelExpr:
    """Base class for covariance expression nodes."""

    def leaves(self) -> Iterator["KernelExpr"]:
        yield self

    @property
    def n_params(self) -> int:
        return sum(1 for _ in self.leaves())

    def __add__(self, other: "KernelExpr") -> "Sum":
        return Sum((self, other))

    def __mul__(self, other: "KernelExpr") -> "Product":
        return Product((self, other))


@dataclass(frozen=True)
class Linear(KernelExpr):
    """sigma0^2 + x . x': similar distance from the origin, similar value."""


@dataclass(frozen=True)
class RBF(KernelExpr):
    """exp(-|x - x'|^2 / (2 l^2)): nearby points have similar values."""


@dataclass(frozen=True)
class WhiteNoise(KernelExpr):
    """sigma_n^2 when both arguments are the same observation, else 0."""


@dataclass(frozen=True)
class Sum(KernelExpr):
    terms: tuple[KernelExpr, ...]

    def __post_init__(self):
        if not self.terms:
            raise StructuralError("Sum requires at least one term")

    def leaves(self):
        for t in self.terms:
            yield from t.leaves()


@dataclass(frozen=True)
class Product(KernelExpr):
    factors: tuple[KernelExpr, ...]

    def __post_init__(self):
        if not self.factors:
            raise StructuralError("Product requires at least one factor")
        n_noise = sum(1 for f in self.factors if isinstance(f, WhiteNoise))
        if n_noise >= 2:
            raise StructuralError("Product of two WhiteNoise leaves is disallowed")

    def leaves(self):
        for f in self.factors:
            yield from f.leaves()


def format_kernel(expr: KernelExpr) -> str:
    """Render an expression in the report notation, e.g. "lin*rbf+noise"."""
    if isinstance(expr, Linear):
        return "lin"
    if isinstance(expr, RBF):
        return "rbf"
    if isinstance(expr, WhiteNoise):
        return "noise"
    if isinstance(expr, Sum):
        return "+".join(format_kernel(t) for t in expr.terms)
    if isinstance(expr, Product):
        parts = []
        for f in expr.factors:
            s = format_kernel(f)
            parts.append(f"({s})" if isinstance(f, Sum) else s)
        return "*".join(parts)
    raise StructuralError(f"unknown kernel node {type(expr).__name__}")


class Hyperparams:
    """Positive per-leaf hyperparameters, held and optimized in log-space."""

    __slots__ = ("_log",)

    def __init__(self, log_values):
        arr = np.asarray(log_values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise ValidationError("log hyperparameters must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        self._log = arr

    @classmethod
    def from_values(cls, values) -> "Hyperparams":
        arr = np.asarray(values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ValidationError("hyperparameter values must be finite and > 0")
        return cls(np.log(arr))

    @property
    def log(self) -> np.ndarray:
        return self._log

    @property
    def values(self) -> np.ndarray:
        return np.exp(self._log)

    def __len__(self) -> int:
        return self._log.size

    def __eq__(self, other) -> bool:
        return isinstance(other, Hyperparams) and np.array_equal(self._log, other._log)

    def __repr__(self) -> str:
        vals = ", ".join(f"{v:.6g}" for v in self.values)
        return f"Hyperparams([{vals}])"


def check_arity(kernel: KernelExpr, theta: Hyperparams) -> None:
    n = kernel.n_params
    if len(theta) != n:
        raise StructuralError(
            f"kernel has {n} hyperparameters but theta has {len(theta)}"
        )


class Candidate(NamedTuple):
    """One row of the 15-kernel evaluation grid."""

    name: str
    kernel: KernelExpr


def _signal_family() -> list[tuple[str, tuple[KernelExpr, ...]]]:
    comb = Product((Linear(), RBF()))
    return [
        ("lin", (Linear(),)),
        ("rbf", (RBF(),)),
        ("lin+rbf", (Linear(), RBF())),
        ("lin*rbf", (comb,)),
        ("lin+rbf+lin*rbf", (Linear(), RBF(), comb)),
    ]


def _noise_family() -> list[tuple[str, tuple[KernelExpr, ...]]]:
    return [
        ("N1", (WhiteNoise(),)),
        ("N2", (WhiteNoise(), Product((Linear(), WhiteNoise())))),
        ("N3", (WhiteNoise(), Product((RBF(), WhiteNoise())))),
    ]


def enumerate_candidate_kernels() -> list[Candidate]:
    """The full candidate grid: 5 signal forms x 3 noise forms.

    Ordering is signal-major with noise cycling fastest, matching the
    report row order ("lin+N1" first).
    """
    out = []
    for sig_name, sig_terms in _signal_family():
        for noise_name, noise_terms in _noise_family():
            expr = Sum(sig_terms + noise_terms)
            out.append(Candidate(f"{sig_name}+{noise_name}", expr))
    return out


def candidate_by_name(name: str) -> Candidate:
    for cand in enumerate_candidate_kernels():
        if cand.name == name:
            return cand
    known = ", ".join(c.name for c in enumerate_candidate_kernels())
    raise ValidationError(f"unknown kernel name {name!r}; expected one of: {known}")
