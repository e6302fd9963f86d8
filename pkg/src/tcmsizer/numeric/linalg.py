"""Householder QR and QR-based linear least squares."""

import numpy as np

from ..errors import RankDeficient

RANK_RTOL = 1e-12


def householder_qr(a):
    """Thin QR factorization by Householder reflections.

    Returns ``(q1, r1)`` with ``q1`` of shape (m, n) having orthonormal
    columns and ``r1`` (n, n) upper triangular, such that ``a = q1 @ r1``.
    Raises RankDeficient when a diagonal of ``r1`` falls below
    ``1e-12 * max|a|``.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2:
        raise ValueError("householder_qr expects a 2-D matrix")
    m, n = a.shape
    if m < n or n < 1:
        raise ValueError(f"need rows >= cols >= 1, got {m}x{n}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")

    threshold = RANK_RTOL * np.max(np.abs(a))
    r = a.copy()
    vs = []
    for k in range(n):
        x = r[k:, k]
        normx = np.linalg.norm(x)
        if normx <= threshold:
            raise RankDeficient(f"column {k} is numerically dependent on earlier columns")
        v = x.copy()
        # Reflect onto -sign(x0)*|x| e1 to avoid cancellation.
        v[0] += normx if x[0] >= 0 else -normx
        v /= np.linalg.norm(v)
        r[k:, k:] -= 2.0 * np.outer(v, v @ r[k:, k:])
        vs.append(v)

    # Accumulate Q1 = H_1 H_2 ... H_n applied to the first n columns of I.
    q = np.eye(m, n)
    for k in range(n - 1, -1, -1):
        v = vs[k]
        q[k:, :] -= 2.0 * np.outer(v, v @ q[k:, :])

    r1 = np.triu(r[:n, :])
    if np.min(np.abs(np.diag(r1))) <= threshold:
        raise RankDeficient("matrix is numerically rank deficient")
    return q, r1


def back_substitute(r, b):
    """Solve the upper-triangular system ``r @ x = b``."""
    n = r.shape[0]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - r[i, i + 1:] @ x[i + 1:]) / r[i, i]
    return x


def solve_linear_lsq(x, y):
    """Least-squares coefficients ``B`` minimizing ``||y - x @ B||^2``.

    ``x`` is the N x (p+1) design matrix (intercept column included by the
    caller). The solve goes through ``R1 B = Q1^T y`` rather than forming
    ``x^T x``, which has the same minimizer but squares the condition number.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"design matrix has {x.shape[0]} rows but y has {y.shape[0]} entries")
    q1, r1 = householder_qr(x)
    return back_substitute(r1, q1.T @ y)
