"""P1 finite elements for boundary eigenvalue problems on planar domains."""

from __future__ import annotations

import numpy as np

from ..bounds import SpectrumTriple
from ..closed_form import DomainSpec
from .dtn import DtNSystem, assemble, dtn_matrix, harmonic_extension, solve_spectrum
from .mesh import Mesh, gen_polar_mesh, load_mesh, refinement, save_mesh

__all__ = [
    "Mesh",
    "DtNSystem",
    "gen_polar_mesh",
    "load_mesh",
    "save_mesh",
    "refinement",
    "assemble",
    "dtn_matrix",
    "solve_spectrum",
    "harmonic_extension",
    "FemSpectra",
    "fem_spectra",
]


def _snap_kernel(values: np.ndarray, dim: int) -> np.ndarray:
    # the first `dim` eigenvalues are exact zeros (constants per component)
    out = np.array(values, dtype=float)
    scale = max(1.0, float(np.abs(out).max()))
    for i in range(min(dim, len(out))):
        if abs(out[i]) <= 1e-9 * scale:
            out[i] = 0.0
    return np.maximum.accumulate(out)


class FemSpectra:
    """Meshed domain with its Schur complement computed once, reusable across beta."""

    def __init__(self, domain: DomainSpec, n_radial: int, n_angular: int):
        self.domain = domain
        self.mesh = gen_polar_mesh(domain, n_radial, n_angular)
        self.system = assemble(self.mesh)
        self.N = dtn_matrix(self.system)
        self._steklov = None
        self._eta = None

    @property
    def n_boundary(self) -> int:
        return self.system.n_boundary

    def steklov(self) -> np.ndarray:
        if self._steklov is None:
            vals = solve_spectrum(self.system, 0.0, N=self.N).values
            self._steklov = _snap_kernel(vals, 1)
        return self._steklov

    def eta(self) -> np.ndarray:
        if self._eta is None:
            vals = solve_spectrum(self.system, mode="boundary").values
            self._eta = _snap_kernel(vals, self.system.n_loops)
        return self._eta

    def wentzel(self, beta: float) -> np.ndarray:
        if beta == 0:
            return self.steklov()
        vals = solve_spectrum(self.system, beta, N=self.N).values
        return _snap_kernel(vals, 1)

    def triple(self, beta: float, count: int) -> SpectrumTriple:
        if count > self.n_boundary:
            raise ValueError(f"count {count} exceeds {self.n_boundary} boundary vertices")
        return SpectrumTriple(
            float(beta),
            tuple(float(x) for x in self.steklov()[:count]),
            tuple(float(x) for x in self.eta()[:count]),
            tuple(float(x) for x in self.wentzel(beta)[:count]),
        )


def fem_spectra(domain: DomainSpec, beta: float, count: int, level: int = 2) -> SpectrumTriple:
    return FemSpectra(domain, *refinement(level)).triple(beta, count)
