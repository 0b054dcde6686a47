"""Small dense linear algebra, batched over leading axes.

Charts have dimension at most a dozen, so plain Gauss-Jordan elimination with
partial pivoting is used; a pivot below ``PIVOT_TOL`` marks a singular matrix.
"""

from __future__ import annotations

import numpy as np

PIVOT_TOL = 1e-12


class SingularMatrixError(np.linalg.LinAlgError):
    def __init__(self, message: str, index: int | tuple = 0, pivot: float = 0.0):
        self.index = index
        self.pivot = pivot
        super().__init__(message)


def _batched(a: np.ndarray):
    a = np.asarray(a, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    batch = a.shape[:-2]
    n = a.shape[-1]
    return a.reshape((-1, n, n)), batch, n


def gauss_jordan_inverse(a, tol: float = PIVOT_TOL) -> np.ndarray:
    """Inverse of each matrix in ``a[..., n, n]``.

    Raises :class:`SingularMatrixError` naming the first batch entry whose
    pivot falls below ``tol``.
    """
    m, batch, n = _batched(a)
    b = m.shape[0]
    work = np.concatenate([m.copy(), np.broadcast_to(np.eye(n), (b, n, n))], axis=2)
    rows = np.arange(b)
    for k in range(n):
        p = k + np.argmax(np.abs(work[:, k:, k]), axis=1)
        piv = work[rows, p, k]
        bad = np.abs(piv) < tol
        if np.any(bad):
            i = int(np.argmax(bad))
            idx = np.unravel_index(i, batch) if batch else ()
            raise SingularMatrixError(
                f"singular matrix: pivot {abs(piv[i]):.3g} < {tol:g} in column {k}", idx, float(piv[i])
            )
        swap = p != k
        if np.any(swap):
            r = rows[swap]
            tmp = work[r, k, :].copy()
            work[r, k, :] = work[r, p[swap], :]
            work[r, p[swap], :] = tmp
        work[:, k, :] /= work[:, k, k][:, None]
        factor = work[:, :, k].copy()
        factor[:, k] = 0.0
        work -= factor[:, :, None] * work[:, k, :][:, None, :]
    return work[:, :, n:].reshape(batch + (n, n))


def min_abs_pivot(a) -> np.ndarray:
    """Smallest absolute pivot met by partial-pivoting elimination, per matrix."""
    m, batch, n = _batched(a)
    work = m.copy()
    b = work.shape[0]
    rows = np.arange(b)
    smallest = np.full(b, np.inf)
    for k in range(n):
        p = k + np.argmax(np.abs(work[:, k:, k]), axis=1)
        piv = work[rows, p, k]
        smallest = np.minimum(smallest, np.abs(piv))
        tmp = work[rows, k, :].copy()
        work[rows, k, :] = work[rows, p, :]
        work[rows, p, :] = tmp
        safe = np.where(piv == 0.0, 1.0, piv)
        factor = work[:, k + 1:, k] / safe[:, None]
        work[:, k + 1:, :] -= factor[:, :, None] * work[:, k, :][:, None, :]
    return smallest.reshape(batch)


def cholesky_pivots(a) -> np.ndarray:
    """Diagonal pivots ``d_k`` of the LDL^T factorisation of symmetric ``a``.

    All pivots are positive exactly when the matrix is positive definite.
    """
    m, batch, n = _batched(a)
    work = m.copy()
    pivots = np.empty((work.shape[0], n))
    for k in range(n):
        d = work[:, k, k].copy()
        pivots[:, k] = d
        safe = np.where(d == 0.0, 1.0, d)
        col = work[:, k + 1:, k] / safe[:, None]
        work[:, k + 1:, k + 1:] -= col[:, :, None] * work[:, k, k + 1:][:, None, :]
    return pivots.reshape(batch + (n,))
