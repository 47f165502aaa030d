"""Dense symmetric eigensolvers built on cyclic Jacobi rotations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .. import _backend

__all__ = ["JacobiResult", "jacobi_eigh", "generalized_eigh", "FactorizationError"]

JACOBI_TOL = 1e-15
MAX_SWEEPS = 60


class FactorizationError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class JacobiResult:
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int
    off_norm: float


def jacobi_eigh(a, *, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS, backend: str | None = None) -> JacobiResult:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Eigenvalues come back ascending with matching eigenvector columns.
    """
    a = np.array(a, dtype=np.float64, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need a square matrix")
    a = 0.5 * (a + a.T)
    a = np.ascontiguousarray(a)
    n = a.shape[0]
    v = np.eye(n)
    sweeps, off = _backend.get(backend).jacobi_sweeps(a, v, tol, max_sweeps)
    if off > tol * max(np.linalg.norm(a), 1e-300) * 10:
        raise np.linalg.LinAlgError(f"Jacobi did not converge: off-norm {off:.3e} after {sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return JacobiResult(w[order], v[:, order], int(sweeps), float(off))


def generalized_eigh(K, M, *, backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``K x = lam M x`` for symmetric K and SPD M via ``M = C C^T``."""
    try:
        C = np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"mass matrix is not positive definite: {exc}") from None
    X = solve_triangular(C, K, lower=True)
    S = solve_triangular(C, X.T, lower=True)
    res = jacobi_eigh(S, backend=backend)
    vecs = solve_triangular(C.T, res.vectors, lower=False)
    return res.values, vecs
