# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled interpreter for flattened kernel programs.

Per-pair stack machine fused across the expression tree: one pass over
the pair grid computes the covariance and all log-space hyperparameter
gradients without numpy temporaries. Opcode values mirror
bartr.kernels.program.
"""

import numpy as np

from libc.math cimport exp

BACKEND = "compiled"

DEF C_MAX_STACK = 32
DEF C_MAX_PARAMS = 16

cdef int C_OP_LIN = 0
cdef int C_OP_RBF = 1
cdef int C_OP_NOISE = 2
cdef int C_OP_ADD = 3
cdef int C_OP_MUL = 4


cdef inline void _eval_pair(
    const int[::1] ops, const int[::1] args, const double[::1] theta,
    double dot, double sq, double ey, bint want_grads, int n_params,
    double* out_val, double* out_grad,
) noexcept nogil:
    cdef double vstack[C_MAX_STACK]
    cdef double gstack[C_MAX_STACK][C_MAX_PARAMS]
    cdef int sp = 0
    cdef int k, p, c, base, f
    cdef int n_ops = ops.shape[0]
    cdef int op, a
    cdef double t, q, v, acc

    for k in range(n_ops):
        op = ops[k]
        a = args[k]
        if op <= C_OP_NOISE:
            t = theta[a]
            if op == C_OP_LIN:
                v = t * t + dot
                q = 2.0 * t * t
            elif op == C_OP_RBF:
                q = sq / (t * t)
                v = exp(-0.5 * q)
                q = v * q
            else:
                v = t * t * ey
                q = 2.0 * t * t * ey
            vstack[sp] = v
            if want_grads:
                for p in range(n_params):
                    gstack[sp][p] = 0.0
                gstack[sp][a] = q
            sp += 1
        elif op == C_OP_ADD:
            c = a
            base = sp - c
            for f in range(1, c):
                vstack[base] += vstack[base + f]
                if want_grads:
                    for p in range(n_params):
                        gstack[base][p] += gstack[base + f][p]
            sp = base + 1
        else:
            c = a
            base = sp - c
            acc = vstack[base]
            for f in range(1, c):
                v = vstack[base + f]
                if want_grads:
                    for p in range(n_params):
                        gstack[base][p] = gstack[base][p] * v + acc * gstack[base + f][p]
                acc = acc * v
            vstack[base] = acc
            sp = base + 1

    out_val[0] = vstack[0]
    if want_grads:
        for p in range(n_params):
            out_grad[p] = gstack[0][p]


def evaluate(program, theta, feats, want_grads=False):
    """Same contract as the numpy engine: K or (K, G)."""
    cdef const int[::1] ops = program.opcodes
    cdef const int[::1] args = program.args
    cdef int n_params = program.n_params
    theta_arr = np.ascontiguousarray(theta, dtype=np.float64)
    cdef const double[::1] th = theta_arr
    cdef const double[:, ::1] dots = feats.dots
    cdef const double[:, ::1] sqd = feats.sqd
    cdef const double[:, ::1] eye = feats.eye
    cdef bint wg = want_grads
    cdef bint sym = feats.symmetric
    cdef Py_ssize_t n = dots.shape[0]
    cdef Py_ssize_t m = dots.shape[1]

    K_arr = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] K = K_arr
    G_arr = None
    cdef double[:, :, ::1] G = None
    if wg:
        G_arr = np.empty((n_params, n, m), dtype=np.float64)
        G = G_arr

    cdef Py_ssize_t i, j, j0
    cdef int p
    cdef double val
    cdef double grad[C_MAX_PARAMS]

    with nogil:
        for i in range(n):
            j0 = i if sym else 0
            for j in range(j0, m):
                _eval_pair(ops, args, th, dots[i, j], sqd[i, j], eye[i, j],
                           wg, n_params, &val, grad)
                K[i, j] = val
                if wg:
                    for p in range(n_params):
                        G[p, i, j] = grad[p]
        if sym:
            for i in range(n):
                for j in range(i):
                    K[i, j] = K[j, i]
                    if wg:
                        for p in range(n_params):
                            G[p, i, j] = G[p, j, i]

    if wg:
        return K_arr, G_arr
    return K_arr
