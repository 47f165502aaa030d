"""P1 assembly and the discrete Dirichlet-to-Neumann (Schur complement) spectra.

The Rayleigh quotient ``(int |grad u|^2 + beta int_G |grad_G u|^2) / int_G u^2``
becomes ``(u^T A u + beta u_G^T L_b u_G) / u_G^T M_b u_G``; eliminating the
interior through the harmonic extension leaves ``(N + beta L_b) v = lam M_b v``
on boundary vertices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .. import _backend
from .eigen import generalized_eigh
from .mesh import Mesh

__all__ = [
    "DtNSystem",
    "SolveDiagnostics",
    "InteriorSolveError",
    "DiscreteSpectra",
    "assemble",
    "dtn_matrix",
    "solve_spectrum",
    "harmonic_extension",
    "DIRECT_LIMIT",
]

log = logging.getLogger(__name__)

DIRECT_LIMIT = 200_000
CG_RTOL = 1e-12
RESIDUAL_LIMIT = 1e-10


class InteriorSolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveDiagnostics:
    method: str
    n_interior: int
    max_relative_residual: float
    iterations: int = 0


@dataclass(frozen=True, eq=False)
class DtNSystem:
    mesh: Mesh
    A: sp.csr_matrix
    M_b: np.ndarray
    L_b: np.ndarray
    boundary: np.ndarray
    interior: np.ndarray
    n_loops: int

    @property
    def n_boundary(self) -> int:
        return len(self.boundary)


def assemble(m: Mesh, *, backend: str | None = None) -> DtNSystem:
    """Exact P1 stiffness on all vertices plus boundary mass and boundary stiffness."""
    kern = _backend.get(backend)
    rows, cols, vals, _ = kern.p1_stiffness(m.vertices, m.triangles)
    nv = m.n_vertices
    A = sp.coo_matrix((vals, (rows, cols)), shape=(nv, nv)).tocsr()
    A.sum_duplicates()
    A = (0.5 * (A + A.T)).tocsr()

    boundary = m.boundary_vertices
    nb = len(boundary)
    local = {int(g): i for i, g in enumerate(boundary)}
    M_b = np.zeros((nb, nb))
    L_b = np.zeros((nb, nb))
    for loop in m.boundary_loops:
        a = loop
        b = np.roll(loop, -1)
        seg = m.vertices[b] - m.vertices[a]
        length = np.hypot(seg[:, 0], seg[:, 1])
        for ga, gb, h in zip(a, b, length):
            i, j = local[int(ga)], local[int(gb)]
            M_b[i, i] += h / 3.0
            M_b[j, j] += h / 3.0
            M_b[i, j] += h / 6.0
            M_b[j, i] += h / 6.0
            L_b[i, i] += 1.0 / h
            L_b[j, j] += 1.0 / h
            L_b[i, j] -= 1.0 / h
            L_b[j, i] -= 1.0 / h
    mask = np.ones(nv, dtype=bool)
    mask[boundary] = False
    interior = np.flatnonzero(mask)
    return DtNSystem(m, A, M_b, L_b, boundary, interior, len(m.boundary_loops))


def _interior_solve(s: DtNSystem, rhs: np.ndarray, direct_limit: int) -> tuple[np.ndarray, SolveDiagnostics]:
    """Solve ``A_II X = rhs`` column by column."""
    A_II = s.A[s.interior][:, s.interior].tocsc()
    nI = A_II.shape[0]
    rhs = np.atleast_2d(rhs.T).T
    iters = 0
    if nI <= direct_limit:
        method = "direct"
        try:
            lu = spla.splu(A_II)
        except RuntimeError as exc:
            raise InteriorSolveError(f"factorization of the interior block failed: {exc}") from None
        X = lu.solve(rhs)
    else:
        import pyamg

        method = "amg-cg"
        ml = pyamg.smoothed_aggregation_solver(A_II.tocsr(), symmetry="symmetric")
        M = ml.aspreconditioner(cycle="V")
        X = np.empty_like(rhs)
        for j in range(rhs.shape[1]):
            count = [0]

            def cb(_x, count=count):
                count[0] += 1

            bj = rhs[:, j]
            if not np.any(bj):
                X[:, j] = 0.0
                continue
            xj, info = spla.cg(A_II, bj, rtol=CG_RTOL, atol=0.0, maxiter=2000, M=M, callback=cb)
            if info != 0:
                raise InteriorSolveError(f"CG did not converge for column {j} (info={info}, iterations={count[0]})")
            X[:, j] = xj
            iters = max(iters, count[0])
    R = A_II @ X - rhs
    norms = np.linalg.norm(rhs, axis=0)
    rel = np.linalg.norm(R, axis=0) / np.where(norms > 0, norms, 1.0)
    worst = float(rel.max()) if rel.size else 0.0
    if worst > RESIDUAL_LIMIT:
        raise InteriorSolveError(f"interior solve residual {worst:.3e} exceeds {RESIDUAL_LIMIT:g} ({method})")
    return X, SolveDiagnostics(method, nI, worst, iters)


def dtn_matrix(s: DtNSystem, *, direct_limit: int = DIRECT_LIMIT, diagnostics: bool = False):
    """Schur complement ``N = A_GG - A_GI A_II^{-1} A_IG`` on boundary vertices."""
    b, i = s.boundary, s.interior
    A_GG = s.A[b][:, b].toarray()
    if len(i) == 0:
        N = A_GG
        diag = SolveDiagnostics("none", 0, 0.0)
    else:
        A_IG = s.A[i][:, b].toarray()
        X, diag = _interior_solve(s, A_IG, direct_limit)
        N = A_GG - A_IG.T @ X
    N = 0.5 * (N + N.T)
    log.debug("dtn: %s", diag)
    return (N, diag) if diagnostics else N


@dataclass(frozen=True)
class DiscreteSpectra:
    values: np.ndarray
    vectors: np.ndarray | None = None
    beta: float | None = None


def solve_spectrum(
    s: DtNSystem,
    beta: float = 0.0,
    count: int | None = None,
    *,
    mode: str = "wentzel",
    N: np.ndarray | None = None,
    vectors: bool = False,
    backend: str | None = None,
) -> DiscreteSpectra:
    """Lowest ``count`` eigenvalues of ``(N + beta L_b, M_b)`` or of ``(L_b, M_b)``.

    ``mode="wentzel"`` with ``beta=0`` is the Steklov problem;
    ``mode="boundary"`` gives the boundary-Laplacian list.  Pass a
    precomputed ``N`` to reuse it across beta values.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    nb = s.n_boundary
    count = nb if count is None else count
    if not 1 <= count <= nb:
        raise ValueError(f"count must be in [1, {nb}]")
    if mode == "boundary":
        K = s.L_b
    elif mode == "wentzel":
        if N is None:
            N = dtn_matrix(s)
        K = N + beta * s.L_b if beta else N
    else:
        raise ValueError(f"unknown mode {mode!r}")
    w, v = generalized_eigh(K, s.M_b, backend=backend)
    return DiscreteSpectra(w[:count], v[:, :count] if vectors else None, beta if mode == "wentzel" else None)


def harmonic_extension(s: DtNSystem, boundary_values, *, direct_limit: int = DIRECT_LIMIT) -> np.ndarray:
    """Nodal field equal to the data on the boundary and discretely harmonic inside."""
    g = np.asarray(boundary_values, dtype=float)
    if g.shape != (s.n_boundary,):
        raise ValueError(f"expected {s.n_boundary} boundary values")
    u = np.zeros(s.mesh.n_vertices)
    u[s.boundary] = g
    if len(s.interior):
        rhs = -(s.A[s.interior][:, s.boundary] @ g)
        X, _ = _interior_solve(s, rhs[:, None], direct_limit)
        u[s.interior] = X[:, 0]
    return u
