"""Eigensolvers and expectation values.

Dense full-spectrum diagonalization for small sectors and a Krylov
(Lanczos, full reorthogonalization via ARPACK) extremal solver for large
ones.  Both paths return a SpectrumResult.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

DENSE_DIM_GUARD = 1 << 14
KRYLOV_TOL = 1e-12


class SolverError(RuntimeError):
    pass


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray | None = None  # columns match eigenvalues
    metadata: dict = field(default_factory=dict)

    @property
    def normalized_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues - self.eigenvalues[0]

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def gap(self) -> float:
        if len(self.eigenvalues) < 2:
            raise ValueError("need at least two eigenvalues for a gap")
        return float(self.eigenvalues[1] - self.eigenvalues[0])


def _as_matrix(op):
    if sp.issparse(op):
        return op
    if isinstance(op, np.ndarray):
        return op
    if hasattr(op, "matrix"):
        return op.matrix
    if hasattr(op, "to_dense"):
        return op.to_dense()
    raise TypeError(f"unsupported operator type {type(op)!r}")


def diagonalize_dense(op, compute_vectors: bool = True, **metadata) -> SpectrumResult:
    """Full spectrum of a Hermitian operator via a dense eigensolver."""
    M = _as_matrix(op)
    dim = M.shape[0]
    if dim > DENSE_DIM_GUARD:
        raise SolverError(
            f"dimension {dim} exceeds dense guard {DENSE_DIM_GUARD}; "
            "use diagonalize_extremal"
        )
    dense = M.toarray() if sp.issparse(M) else np.asarray(M)
    if compute_vectors:
        vals, vecs = np.linalg.eigh(dense)
        return SpectrumResult(vals, vecs, metadata=metadata)
    return SpectrumResult(np.linalg.eigvalsh(dense), metadata=metadata)


def diagonalize_extremal(op, k: int, **metadata) -> SpectrumResult:
    """k lowest eigenpairs via Lanczos iteration."""
    M = _as_matrix(op)
    dim = M.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= dim:
        raise ValueError(f"k = {k} must be smaller than dimension {dim}")
    if dim <= max(2 * k + 2, 32):
        # Too small for ARPACK to be worthwhile; fall back to dense.
        res = diagonalize_dense(M, compute_vectors=True, **metadata)
        return SpectrumResult(
            res.eigenvalues[:k], res.eigenvectors[:, :k], metadata=metadata
        )
    try:
        vals, vecs = spla.eigsh(
            M.astype(float) if sp.issparse(M) else M,
            k=k,
            which="SA",
            tol=KRYLOV_TOL,
            maxiter=10 * dim,
        )
    except spla.ArpackNoConvergence as exc:
        raise SolverError(
            f"Krylov iteration failed to converge: {len(exc.eigenvalues)} of "
            f"{k} eigenvalues converged"
        ) from exc
    order = np.argsort(vals)
    return SpectrumResult(vals[order], vecs[:, order], metadata=metadata)


def expectation(state: np.ndarray, op) -> float:
    """<v|O|v> for a normalized state and Hermitian operator."""
    state = np.asarray(state)
    M = _as_matrix(op)
    if M.shape[1] != state.shape[0]:
        raise ValueError("state dimension does not match operator")
    val = np.vdot(state, M @ state)
    if abs(val.imag) > 1e-12:
        raise ValueError(f"non-real expectation {val} for Hermitian operator")
    return float(val.real)
