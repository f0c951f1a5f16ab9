"""Primal L2-regularized hinge-loss classifier, solved through its dual.

Objective:  F(w, b) = 0.5 * ||w||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b))

The dual box-constrained QP is optimized with maximal-violating-pair
coordinate updates (deterministic: no sampling, ties resolved by lowest
index, fixed reduction order).  Stopping follows the relative-objective-
change rule: after each epoch of n pair updates the primal objective is
evaluated and the run stops once its relative change drops below the
configured tolerance, or earlier when the KKT gap vanishes.
"""

from __future__ import annotations

import numpy as np

_TAU = 1e-12  # curvature floor for coincident points
_KKT_EPS = 1e-12  # gap below which the dual is treated as exactly optimal

# Kernel caching keeps pair updates O(n); above this row count fall back to
# recomputing kernel columns on demand to bound memory.
_CACHE_MAX_ROWS = 4096


def primal_objective(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, C: float) -> float:
    margins = 1.0 - y * (X @ w + b)
    np.maximum(margins, 0.0, out=margins)
    return 0.5 * float(w @ w) + C * float(margins.sum())


def solve_hinge_svm(
    X: np.ndarray,
    y: np.ndarray,
    C: float = 1.0,
    tolerance: float = 1e-6,
    max_epochs: int = 1000,
):
    """Returns (w, b, info) minimizing the soft-margin objective.

    X: (n, d) float array of scaled features; y: (n,) array of +-1 labels.
    info carries epochs run, final KKT gap, objective value, and a
    converged flag.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    if n < 2 or not (np.any(y > 0) and np.any(y < 0)):
        raise ValueError("need at least one row of each class")

    alpha = np.zeros(n)
    cache = X @ X.T if n <= _CACHE_MAX_ROWS else None
    diag = np.einsum("ij,ij->i", X, X)

    # G = y * (X w) - 1 is the dual gradient; maintained incrementally.
    G = -np.ones(n)

    def kernel_col(i: int) -> np.ndarray:
        return cache[i] if cache is not None else X @ X[i]

    def bias(v: np.ndarray, up: np.ndarray, low: np.ndarray) -> float:
        return 0.5 * (np.max(v[up]) + np.min(v[low]))

    pos, neg = y > 0, y < 0
    F_prev = primal_objective(np.zeros(d), 0.0, X, y, C)  # = C * n at the origin
    epochs = 0
    gap = np.inf
    converged = False

    for epoch in range(max_epochs):
        epochs = epoch + 1
        for _ in range(n):
            v = -y * G
            up = (pos & (alpha < C)) | (neg & (alpha > 0.0))
            low = (neg & (alpha < C)) | (pos & (alpha > 0.0))
            i = int(np.argmax(np.where(up, v, -np.inf)))
            j = int(np.argmin(np.where(low, v, np.inf)))
            gap = float(v[i] - v[j])
            if gap <= _KKT_EPS:
                break
            eta = float(diag[i] + diag[j] - 2.0 * (X[i] @ X[j]))
            step = gap / max(eta, _TAU)
            # Box limits along the feasible direction (i gains, j loses mass).
            room_i = (C - alpha[i]) if y[i] > 0 else alpha[i]
            room_j = alpha[j] if y[j] > 0 else (C - alpha[j])
            step = min(step, room_i, room_j)
            ki, kj = kernel_col(i), kernel_col(j)
            G += y * (step * (ki - kj))
            alpha[i] += y[i] * step
            alpha[j] -= y[j] * step
            # Snap to the box so index sets stay exact.
            for t in (i, j):
                if alpha[t] < _TAU:
                    alpha[t] = 0.0
                elif alpha[t] > C - _TAU:
                    alpha[t] = C

        w = (alpha * y) @ X
        v = -y * G
        up = (pos & (alpha < C)) | (neg & (alpha > 0.0))
        low = (neg & (alpha < C)) | (pos & (alpha > 0.0))
        b = bias(v, up, low)
        F = primal_objective(w, b, X, y, C)
        if gap <= _KKT_EPS or abs(F_prev - F) <= tolerance * max(1.0, abs(F_prev)):
            converged = True
            F_prev = F
            break
        F_prev = F

    w = (alpha * y) @ X
    G = y * (X @ w) - 1.0
    v = -y * G
    up = (pos & (alpha < C)) | (neg & (alpha > 0.0))
    low = (neg & (alpha < C)) | (pos & (alpha > 0.0))
    b = bias(v, up, low)
    info = {
        "epochs": epochs,
        "kkt_gap": float(np.max(v[up]) - np.min(v[low])),
        "objective": primal_objective(w, b, X, y, C),
        "converged": converged,
    }
    return w, b, info
