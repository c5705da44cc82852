"""Dense GF(2) linear algebra on numpy uint8 arrays.

Everything here is plain Gaussian elimination with XOR row operations.
Matrices are (m, n) arrays with entries in {0, 1}.
"""

from __future__ import annotations

import numpy as np


def _as_gf2(M) -> np.ndarray:
    A = np.array(M, dtype=np.uint8, copy=True) % 2
    if A.ndim != 2:
        raise ValueError("expected a 2-D binary matrix")
    return A


def row_echelon(M) -> tuple[np.ndarray, list[int]]:
    """Row-reduce over GF(2).

    Returns the echelon form and the list of pivot column indices
    (whose length is the GF(2) rank).
    """
    R = _as_gf2(M)
    m, n = R.shape
    pivot_cols: list[int] = []
    pivot_row = 0
    for col in range(n):
        if pivot_row >= m:
            break
        rows = np.nonzero(R[pivot_row:, col])[0]
        if rows.size == 0:
            continue
        found = pivot_row + rows[0]
        if found != pivot_row:
            R[[pivot_row, found]] = R[[found, pivot_row]]
        below = np.nonzero(R[pivot_row + 1:, col])[0] + pivot_row + 1
        R[below] ^= R[pivot_row]
        pivot_cols.append(col)
        pivot_row += 1
    return R, pivot_cols


def rank(M) -> int:
    return len(row_echelon(M)[1])


def kernel_basis(M) -> np.ndarray:
    """Basis of the right null space {v : Mv = 0 over GF(2)}.

    Returns an array of shape (n - rank, n); empty (0, n) array for a
    full-column-rank input.
    """
    R, pivots = row_echelon(M)
    n = R.shape[1]
    free_cols = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free_cols), n), dtype=np.uint8)
    # Back-substitute one free variable at a time.
    for k, fc in enumerate(free_cols):
        v = basis[k]
        v[fc] = 1
        for i in reversed(range(len(pivots))):
            pc = pivots[i]
            acc = int(np.bitwise_and(R[i], v).sum() % 2)
            v[pc] = acc ^ v[pc]  # v[pc] is 0 here; set to satisfy row i
    return basis


def row_space_basis(M) -> np.ndarray:
    """Independent subset of the rows of M (original row vectors)."""
    A = _as_gf2(M)
    chosen: list[int] = []
    r = 0
    for i in range(A.shape[0]):
        if rank(A[chosen + [i]]) > r:
            chosen.append(i)
            r += 1
    return A[chosen]


def solve(A, b) -> np.ndarray | None:
    """One solution x of Ax = b over GF(2), or None if inconsistent."""
    A = _as_gf2(A)
    b = np.asarray(b, dtype=np.uint8) % 2
    m, n = A.shape
    aug = np.concatenate([A, b.reshape(m, 1)], axis=1)
    R, pivots = row_echelon(aug)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for i in reversed(range(len(pivots))):
        pc = pivots[i]
        acc = int(np.bitwise_and(R[i, :n], x).sum() % 2)
        x[pc] = acc ^ R[i, n]
    return x


def in_row_space(M, v) -> bool:
    """True iff v lies in the GF(2) span of the rows of M."""
    A = _as_gf2(M)
    return rank(A) == rank(np.vstack([A, np.asarray(v, dtype=np.uint8) % 2]))
