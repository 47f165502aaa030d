"""Steklov, Wentzel and boundary-Laplacian spectra with curvature-based eigenvalue bounds."""

from ._backend import ACTIVE as BACKEND
from .bounds import BoundReport, GeometryBounds, SpectrumTriple, derive_constants, verify
from .closed_form import closed_form_spectra, geometry_of, parse_domain

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundReport",
    "GeometryBounds",
    "SpectrumTriple",
    "closed_form_spectra",
    "derive_constants",
    "geometry_of",
    "parse_domain",
    "verify",
]
