"""Reference orthogonal matching pursuit kernel in plain NumPy.

Greedy correlation pick plus a full least-squares refit per iteration. This
is the semantic reference: the compiled kernel must agree with it on
well-conditioned problems and defers to it on rank-deficient ones.
"""

from __future__ import annotations

import numpy as np

__all__ = ["omp_greedy"]


def omp_greedy(a, y, k_max, rel_tol):
    """Greedy sparse approximation of y by columns of a.

    Returns (order, coef, resid_norm, rank_deficient): selected column
    indices in pick order, their joint least-squares coefficients, the final
    residual norm, and whether any refit was rank deficient (in which case
    the coefficients are the minimum-norm solution). Correlation ties break
    toward the lowest column index. Stops after k_max picks or once the
    residual drops to rel_tol times the norm of y.
    """
    a = np.asarray(a, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    _, p = a.shape
    y_norm = float(np.linalg.norm(y))
    k_max = min(int(k_max), p)
    if k_max <= 0 or y_norm == 0.0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.complex128), y_norm, False

    ah = a.conj().T
    taken = np.zeros(p, dtype=bool)
    order: list[int] = []
    coef = np.empty(0, dtype=np.complex128)
    rank_deficient = False
    r = y
    resid_norm = y_norm
    for _ in range(k_max):
        c = ah @ r
        mag2 = c.real * c.real + c.imag * c.imag
        mag2[taken] = -1.0
        j = int(np.argmax(mag2))
        taken[j] = True
        order.append(j)
        sub = a[:, order]
        coef, _, rank, _ = np.linalg.lstsq(sub, y, rcond=None)
        if rank < len(order):
            rank_deficient = True
        r = y - sub @ coef
        resid_norm = float(np.linalg.norm(r))
        if resid_norm <= rel_tol * y_norm:
            break
    return np.asarray(order, dtype=np.int64), coef, resid_norm, rank_deficient
