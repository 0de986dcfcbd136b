"""Moment-based Gaussian quadrature estimate of a spectral distribution.

Given moments m_0..m_{2K}, build the three-term recurrence coefficients via
Cholesky of the Hankel matrix, diagonalize the symmetric tridiagonal Jacobi
matrix, and return nodes and weights.  The K-node rule reproduces the input
moments up to order 2K-1 exactly (up to floating-point error).
"""

from __future__ import annotations

import warnings
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import cholesky, eigh_tridiagonal, LinAlgError


def quadrature_from_moments(moments: Sequence[float],
                            nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the Gaussian quadrature matching the moments.

    moments must cover orders 0..2*nodes-1 at least.  A numerically singular
    Hankel minor triggers a warning and a retry with fewer nodes.
    """
    mom = np.asarray([float(m) for m in moments], dtype=float)
    if mom.size == 0 or mom[0] <= 0:
        raise ValueError("need m_0 > 0")
    k = nodes
    if 2 * k > mom.size:
        raise ValueError(f"{k} nodes need moments up to order {2 * k - 1}")
    while k > 1:
        hankel = np.array([[mom[i + j] for j in range(k + 1)]
                           for i in range(k + 1)])
        try:
            r = cholesky(hankel, lower=False)
        except LinAlgError:
            warnings.warn(
                f"Hankel minor of order {k + 1} numerically singular; "
                f"reducing to {k - 1} nodes")
            k -= 1
            continue
        alpha, beta = _recurrence_from_cholesky(r)
        eigvals, eigvecs = eigh_tridiagonal(alpha, beta)
        weights = mom[0] * eigvecs[0, :] ** 2
        return eigvals, weights
    return np.array([mom[1] / mom[0]]), np.array([mom[0]])


def _recurrence_from_cholesky(r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Jacobi recurrence coefficients from the Cholesky factor of the
    Hankel moment matrix (Golub-Welsch)."""
    k = r.shape[0] - 1
    alpha = np.empty(k)
    beta = np.empty(k - 1) if k > 1 else np.empty(0)
    for i in range(k):
        alpha[i] = r[i, i + 1] / r[i, i]
        if i > 0:
            alpha[i] -= r[i - 1, i] / r[i - 1, i - 1]
        if i < k - 1:
            beta[i] = r[i + 1, i + 1] / r[i, i]
    return alpha, beta


def reconstruct_moments(nodes: np.ndarray, weights: np.ndarray,
                        max_order: int) -> List[float]:
    return [float(np.sum(weights * nodes ** order))
            for order in range(max_order + 1)]
