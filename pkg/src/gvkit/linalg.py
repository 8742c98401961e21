"""Gaussian elimination over GF(q): rank, reduced row echelon form, nullspace."""

from __future__ import annotations

import numpy as np

from .field import GF


def rref(F: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` and its pivot columns."""
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = F.mul(F.inv(R[r, c]), R[r])
        factors = R[:, c].copy()
        factors[r] = 0
        if np.any(factors):
            R = F.sub(R, F.mul(factors[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: GF, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def row_basis(F: GF, M) -> np.ndarray:
    """A basis (as rows) of the row space of ``M``."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1])
    R, piv = rref(F, M)
    return R[: len(piv)]


def nullspace(F: GF, M, ncols: int | None = None) -> np.ndarray:
    """Basis rows ``x`` with ``M x^T = 0``.

    ``ncols`` is needed only when ``M`` has no rows.
    """
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] == 0:
        n = ncols if M.ndim != 2 else M.shape[1]
        return np.eye(n, dtype=np.int64)
    n = M.shape[1]
    R, piv = rref(F, M)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(piv):
            basis[i, pc] = F.neg(R[row, f])
    return basis


def in_row_space(F: GF, M, v) -> bool:
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return not np.any(v)
    return rank(F, np.vstack([M, np.asarray(v)[None, :]])) == rank(F, M)
