"""Exact linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries reduced mod p; every operation
is integer arithmetic, so results are exact.  Matrices at desk scale are
small enough that dense elimination is the simplest correct choice.
"""

from __future__ import annotations

import numpy as np


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def as_matrix(rows, ncols: int, p: int) -> np.ndarray:
    m = np.array(rows, dtype=np.int64).reshape(-1, ncols) if rows else np.zeros((0, ncols), dtype=np.int64)
    return m % p


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (matrix, pivot column list)."""
    m = mat.copy() % p
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = (m[r] * inv_mod(int(m[r, c]), p)) % p
        col = m[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            m[rows] = (m[rows] - np.outer(col[rows], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    return len(rref(mat, p)[1])


def kernel_basis(mat: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right kernel, in reduced echelon order (deterministic)."""
    nrows, ncols = mat.shape
    if ncols == 0:
        return []
    if nrows == 0:
        return [np.eye(ncols, dtype=np.int64)[i] for i in range(ncols)]
    red, pivots = rref(mat, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r, fc]) % p
        basis.append(v)
    return basis


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One particular solution of mat @ x = rhs mod p, or None."""
    nrows, ncols = mat.shape
    aug = np.concatenate([mat % p, (rhs % p).reshape(nrows, 1)], axis=1)
    red, pivots = rref(aug, p)
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, ncols]
    return x


def solve_many(mat: np.ndarray, rhs_cols: np.ndarray, p: int) -> np.ndarray | None:
    """Solve mat @ X = rhs_cols for a whole block of right-hand sides.

    Returns an (ncols, k) solution block, or None if any column is
    unsolvable.  One elimination is shared across all right-hand sides.
    """
    nrows, ncols = mat.shape
    k = rhs_cols.shape[1]
    aug = np.concatenate([mat % p, rhs_cols % p], axis=1)
    red, pivots = rref(aug, p)
    if any(pc >= ncols for pc in pivots):
        return None
    x = np.zeros((ncols, k), dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, ncols:]
    return x


def row_space_contains(basis_rows: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis_rows.shape[0] == 0:
        return not np.any(v % p)
    stacked = np.vstack([basis_rows, v]) % p
    return rank(stacked, p) == rank(basis_rows, p)
