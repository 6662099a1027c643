"""One-time computation of the frozen classifier-oracle fixture values.

Integrates the exact 3-point logistic GP posterior with a 2000-node
trapezoid rule per latent dimension (whitened coordinates on [-8, 8]) and
prints the predictive probabilities for the canonical fixture. The fast
Gauss-Hermite oracle in tests/oracles.py must agree with these numbers.
"""

import json
import time

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import expit

from bartr.kernels import Hyperparams, candidate_by_name, cross_gram, gram, gram_diag

NODES = 2000
ZLIM = 8.0

X = np.array([[-12.0, 8.0, 5.0], [0.0, 22.0, 18.0], [10.0, 14.0, 32.0]])
Y = np.array([1.0, -1.0, 1.0])
XSTAR = np.array(
    [[0.0, 15.0, 10.0], [-6.0, 10.0, 8.0], [9.0, 16.0, 28.0], [0.0, 22.0, 18.0]]
)
KERNEL = "rbf+N1"
THETA = (14.0, 0.4)


def logistic_gauss_table(v: float, mu_grid: np.ndarray) -> np.ndarray:
    """g(mu) = E[sigmoid(N(mu, v))] tabulated by 96-node Gauss-Hermite."""
    from numpy.polynomial.hermite_e import hermegauss

    x, w = hermegauss(96)
    u = mu_grid[None, :] + np.sqrt(v) * x[:, None]
    return (w[:, None] * expit(u)).sum(axis=0) / w.sum()


def main() -> None:
    kern = candidate_by_name(KERNEL).kernel
    theta = Hyperparams.from_values(THETA)
    K = gram(kern, theta, X) + 1e-8 * np.eye(3)
    Ks = cross_gram(kern, theta, X, XSTAR)
    kss = gram_diag(kern, theta, XSTAR)
    L = np.linalg.cholesky(K)

    z = np.linspace(-ZLIM, ZLIM, NODES)
    phi = np.exp(-0.5 * z * z)
    trap = np.ones(NODES)
    trap[0] = trap[-1] = 0.5
    wz = phi * trap

    cs, vs, tables, mu0s, inv_dmu = [], [], [], [], []
    mu_pad = 2.0
    for j in range(len(XSTAR)):
        c = solve_triangular(L, Ks[:, j], lower=True)
        v = max(kss[j] - c @ c, 0.0)
        cmax = np.abs(c).sum() * ZLIM + mu_pad
        mu_grid = np.linspace(-cmax, cmax, 8001)
        tables.append(logistic_gauss_table(v, mu_grid))
        cs.append(c)
        vs.append(v)
        mu0s.append(mu_grid[0])
        inv_dmu.append(1.0 / (mu_grid[1] - mu_grid[0]))

    sig1 = expit(Y[0] * L[0, 0] * z) * wz
    f2 = L[1, 0] * z[:, None] + L[1, 1] * z[None, :]
    sig2 = expit(Y[1] * f2) * wz[None, :]

    num = np.zeros(len(XSTAR))
    den = 0.0
    w3 = wz[None, :]
    t0 = time.time()
    for i1 in range(NODES):
        a3 = L[2, 0] * z[i1] + L[2, 1] * z[:, None] + L[2, 2] * z[None, :]
        lik = sig1[i1] * sig2[i1][:, None] * expit(Y[2] * a3) * w3
        den += lik.sum()
        for j in range(len(XSTAR)):
            mu = (cs[j][0] * z[i1] + cs[j][1] * z[:, None]) + cs[j][2] * z[None, :]
            pos = (mu - mu0s[j]) * inv_dmu[j]
            idx = pos.astype(np.int64)
            frac = pos - idx
            tab = tables[j]
            g = tab[idx] * (1.0 - frac) + tab[idx + 1] * frac
            num[j] += (lik * g).sum()
        if i1 % 200 == 0:
            print(f"{i1}/{NODES} elapsed {time.time()-t0:.0f}s", flush=True)

    probs = num / den
    print(json.dumps({"probs": probs.tolist()}, indent=2))


if __name__ == "__main__":
    main()
