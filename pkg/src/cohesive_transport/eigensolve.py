"""Symmetric eigendecomposition via cyclic Jacobi rotations.

A plain cyclic Jacobi sweep is more than enough for the stiffness
networks this package deals with (a handful of robots, occasionally a
few hundred nodes when stress-testing). It is simple, deterministic,
and produces an orthonormal eigenbasis to near machine precision.

Eigenvalues are returned in ascending order, eigenvectors as the
columns of an orthogonal matrix, so ``V @ diag(w) @ V.T`` reconstructs
the input.
"""
from __future__ import annotations

import math

import numpy as np

DEFAULT_SIZE_CAP = 256

# Sweeps needed in practice: ~log(n) + a few. 64 is a generous safety net.
_MAX_SWEEPS = 64
_CONVERGENCE_RTOL = 1e-12


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def eigen_decompose(matrix, size_cap: int = DEFAULT_SIZE_CAP):
    """Diagonalize a symmetric matrix with cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending
    and eigenvectors as orthonormal columns. Raises ValueError for
    non-square, non-symmetric, or oversized input. Symmetry is checked
    exactly: callers are expected to construct symmetric matrices, not
    approximately symmetric ones.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > size_cap:
        raise ValueError(f"matrix size {n} exceeds cap {size_cap}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")

    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.diag(a).copy(), v

    threshold = _CONVERGENCE_RTOL * scale
    for _ in range(_MAX_SWEEPS):
        if _off_diagonal_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # Rotation angle that annihilates a[p, q].
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c

                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                # Zero the target pair explicitly to stop rounding creep.
                a[p, q] = 0.0
                a[q, p] = 0.0

                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    else:
        raise RuntimeError("Jacobi sweep limit reached without convergence")

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]
