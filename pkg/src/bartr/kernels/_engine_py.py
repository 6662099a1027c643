"""Numpy interpreter for flattened kernel programs.

Reference implementation and import-time fallback when the compiled
engine is unavailable. Gradients are with respect to the log of each
hyperparameter.
"""

from __future__ import annotations

import numpy as np

from .program import OP_ADD, OP_LIN, OP_MUL, OP_NOISE, OP_RBF

BACKEND = "python"


def evaluate(program, theta, feats, want_grads=False):
    """Evaluate a program over pairwise features.

    Returns K of shape (n, m), or (K, G) with G of shape (P, n, m) when
    want_grads is set.
    """
    dots, sqd, eye = feats.dots, feats.sqd, feats.eye
    stack: list[tuple[np.ndarray, dict[int, np.ndarray] | None]] = []
    for op, arg in zip(program.opcodes, program.args):
        if op == OP_LIN:
            s2 = theta[arg] * theta[arg]
            val = s2 + dots
            grads = {int(arg): np.full_like(dots, 2.0 * s2)} if want_grads else None
        elif op == OP_RBF:
            q = sqd / (theta[arg] * theta[arg])
            val = np.exp(-0.5 * q)
            grads = {int(arg): val * q} if want_grads else None
        elif op == OP_NOISE:
            s2 = theta[arg] * theta[arg]
            val = s2 * eye
            grads = {int(arg): 2.0 * s2 * eye} if want_grads else None
        elif op == OP_ADD:
            parts = stack[-arg:]
            del stack[-arg:]
            val = parts[0][0].copy()
            for v, _ in parts[1:]:
                val += v
            if want_grads:
                grads = {}
                for _, g in parts:
                    for p, gm in g.items():
                        grads[p] = grads[p] + gm if p in grads else gm
            else:
                grads = None
        elif op == OP_MUL:
            parts = stack[-arg:]
            del stack[-arg:]
            val = parts[0][0]
            grads = parts[0][1]
            for v, g in parts[1:]:
                if want_grads:
                    new = {p: gm * v for p, gm in grads.items()}
                    for p, gm in g.items():
                        new[p] = new[p] + gm * val if p in new else gm * val
                    grads = new
                val = val * v
        else:
            raise ValueError(f"bad opcode {op}")
        stack.append((val, grads))
    if len(stack) != 1:
        raise ValueError("malformed kernel program")
    val, grads = stack[0]
    if not want_grads:
        return val
    G = np.zeros((program.n_params,) + val.shape)
    for p, gm in grads.items():
        G[p] = gm
    return val, G
