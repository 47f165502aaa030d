"""Curvature-derived constants and the Wentzel eigenvalue upper/lower bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .model_geometry import ExtReal, h_tilde

__all__ = [
    "GeometryBounds",
    "DerivedConstants",
    "SpectrumTriple",
    "BoundReport",
    "Inapplicable",
    "REL_TOL",
    "ABS_TOL",
    "holds",
    "derive_constants",
    "thm1_bound",
    "thm2_bound",
    "thm3_bound",
    "lower_bound",
    "weyl_lower_bound",
    "unit_ball_volume",
    "weyl_constant",
    "weyl_predict",
    "verify",
    "verdict",
]

REL_TOL = 1e-9
ABS_TOL = 1e-12
Q_CLAMP = 1e-12


class Inapplicable(ValueError):
    """A bound's hypotheses fail for the given data (not a numerical error)."""


@dataclass(frozen=True)
class GeometryBounds:
    """Curvature and width data of a domain class.

    ``K_*`` are sectional-curvature bounds, ``kappa_*`` principal-curvature
    bounds of the boundary, ``ricci_K_minus``/``mean_kappa_minus`` the Ricci
    and (averaged) mean-curvature lower bounds used by the Reilly-type bound,
    ``roll`` the rolling radius.
    """

    n: int
    K_minus: float
    K_plus: float
    kappa_minus: float
    kappa_plus: float
    roll: float
    ricci_K_minus: float = 0.0
    mean_kappa_minus: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must be at least 2")
        if self.K_minus > self.K_plus:
            raise ValueError("K_minus > K_plus")
        if self.kappa_minus > self.kappa_plus:
            raise ValueError("kappa_minus > kappa_plus")
        if not self.roll > 0:
            raise ValueError("rolling radius must be positive")

    def dilate(self, c: float) -> "GeometryBounds":
        """Bounds of the domain scaled by ``c``."""
        return replace(
            self,
            K_minus=self.K_minus / c**2,
            K_plus=self.K_plus / c**2,
            kappa_minus=self.kappa_minus / c,
            kappa_plus=self.kappa_plus / c,
            roll=self.roll * c,
            ricci_K_minus=self.ricci_K_minus / c**2,
            mean_kappa_minus=self.mean_kappa_minus / c,
        )


@dataclass(frozen=True)
class DerivedConstants:
    h_tilde: ExtReal
    B: float
    B_bar: float
    A_bar: float


def derive_constants(g: GeometryBounds) -> DerivedConstants:
    ht = h_tilde(g.K_plus, g.kappa_plus)
    if not ht > 0:
        raise Inapplicable("tube width h_tilde must be positive")
    inv = ht.reciprocal()
    B = (g.n - 1) * (math.sqrt(abs(g.K_minus)) + abs(g.kappa_minus))
    return DerivedConstants(
        h_tilde=ht,
        B=B,
        B_bar=2.0 * (B + inv),
        A_bar=2.0 * (B / (g.n - 1) + (g.n - 1) * inv),
    )


def thm1_bound(beta: float, eta_k: float, B_bar: float) -> float:
    """``(1/sqrt(beta) + sqrt(B_bar + beta*eta_k))**2``."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return (1.0 / math.sqrt(beta) + math.sqrt(B_bar + beta * eta_k)) ** 2


def thm2_bound(beta: float, lambda_s: float, A_bar: float) -> float:
    """``(1 + beta*A_bar)*lambda_s + beta*lambda_s**2``."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return (1.0 + beta * A_bar) * lambda_s + beta * lambda_s**2


def thm3_discriminant(n: int, K_minus: float, kappa_minus: float, eta_k: float) -> float:
    p = K_minus + 2.0 * eta_k
    Q = p * p - 4.0 * kappa_minus * (n - 1) * eta_k
    if Q < 0 and abs(Q) <= Q_CLAMP * p * p:
        Q = 0.0
    return Q


def thm3_bound(n: int, K_minus: float, kappa_minus: float, beta: float, eta_k: float) -> float:
    """Reilly-type bound; needs a mean-convex boundary (``kappa_minus > 0``).

    Raises :class:`Inapplicable` when ``kappa_minus <= 0`` or the discriminant
    is negative.
    """
    if kappa_minus <= 0:
        raise Inapplicable(f"needs kappa_minus > 0, got {kappa_minus}")
    Q = thm3_discriminant(n, K_minus, kappa_minus, eta_k)
    if Q < 0:
        raise Inapplicable(f"negative discriminant Q={Q!r} at eta={eta_k!r}")
    p = K_minus + 2.0 * eta_k
    return (p + math.sqrt(Q)) / (2.0 * (n - 1) * kappa_minus) + beta * eta_k


def lower_bound(beta: float, lambda_s_k: float, eta_k: float) -> float:
    return lambda_s_k + beta * eta_k


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d (2 for d=1, pi for d=2)."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def weyl_constant(n: int, vol_boundary: float) -> float:
    if vol_boundary <= 0:
        raise ValueError("boundary volume must be positive")
    return 2.0 * math.pi / (unit_ball_volume(n - 1) * vol_boundary) ** (1.0 / (n - 1))


def weyl_predict(kind: str, k: float, beta: float = 0.0, *, n: int = 2, vol_boundary: float = 2 * math.pi) -> float:
    """Leading-order prediction for the k-th Steklov or Wentzel eigenvalue."""
    C = weyl_constant(n, vol_boundary)
    if kind == "steklov":
        return C * k ** (1.0 / (n - 1))
    if kind == "wentzel":
        return beta * C * C * k ** (2.0 / (n - 1))
    raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class SpectrumTriple:
    """Ascending eigenvalue lists, each repeated by multiplicity."""

    beta: float
    steklov: tuple[float, ...]
    eta: tuple[float, ...]
    wentzel: tuple[float, ...]

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if not len(self.steklov) == len(self.eta) == len(self.wentzel):
            raise ValueError("spectrum lists must have equal lengths")
        for name in ("steklov", "eta", "wentzel"):
            vals = getattr(self, name)
            if any(b < a for a, b in zip(vals, vals[1:])):
                raise ValueError(f"{name} list is not ascending")

    def __len__(self) -> int:
        return len(self.steklov)

    def grouped(self, which: str = "wentzel", rtol: float = 1e-9) -> list[tuple[float, int]]:
        """``(value, multiplicity)`` view of one list."""
        out: list[tuple[float, int]] = []
        for v in getattr(self, which):
            if out and abs(v - out[-1][0]) <= rtol * max(1.0, abs(v)):
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((v, 1))
        return out


def holds(lhs: float, rhs: float, rel: float = REL_TOL, abs_tol: float = ABS_TOL) -> bool:
    """Certified ``lhs <= rhs`` up to floating-point slack."""
    return lhs <= rhs + abs(rhs) * rel + abs_tol


@dataclass
class BoundReport:
    k: int
    lambda_w: float
    lower: float
    bound1: float | None = None
    bound2: float | None = None
    bound3: float | None = None
    bound3_note: str = ""
    lower_pass: bool = True
    pass1: bool | None = None
    pass2: bool | None = None
    pass3: bool | None = None
    weyl_lower: float | None = None
    weyl_lower_pass: bool | None = None

    @property
    def lower_slack(self) -> float:
        return self.lambda_w - self.lower

    @property
    def slack1(self) -> float | None:
        return None if self.bound1 is None else self.bound1 - self.lambda_w

    @property
    def slack2(self) -> float | None:
        return None if self.bound2 is None else self.bound2 - self.lambda_w

    @property
    def slack3(self) -> float | None:
        return None if self.bound3 is None else self.bound3 - self.lambda_w

    @property
    def ok(self) -> bool:
        return self.lower_pass and all(p is not False for p in (self.pass1, self.pass2, self.pass3))

    def violations(self) -> list[str]:
        out = []
        if not self.lower_pass:
            out.append("lower")
        for name, p in (("thm1", self.pass1), ("thm2", self.pass2), ("thm3", self.pass3)):
            if p is False:
                out.append(name)
        return out


def weyl_lower_bound(beta: float, steklov, eta, k: int) -> float:
    """``max over i+j=k of lambda_S,i + beta*eta_j``.

    This is what min-max gives for a sum of two forms.  The diagonal choice
    ``i = j = k`` (:func:`lower_bound`) is only guaranteed when the
    Dirichlet-to-Neumann map and the boundary Laplacian share eigenfunctions.
    """
    return max(steklov[i] + beta * eta[k - i] for i in range(k + 1))


def verify(spectra: SpectrumTriple, g: GeometryBounds, tol: float = REL_TOL) -> list[BoundReport]:
    """Check every index of a spectrum triple against all applicable bounds."""
    beta = spectra.beta
    consts = derive_constants(g)
    reports = []
    for k, (ls, eta, lw) in enumerate(zip(spectra.steklov, spectra.eta, spectra.wentzel)):
        low = lower_bound(beta, ls, eta)
        rep = BoundReport(k=k, lambda_w=lw, lower=low, lower_pass=holds(low, lw, tol))
        rep.weyl_lower = weyl_lower_bound(beta, spectra.steklov, spectra.eta, k)
        rep.weyl_lower_pass = holds(rep.weyl_lower, lw, tol)
        if beta > 0:
            rep.bound1 = thm1_bound(beta, eta, consts.B_bar)
            rep.pass1 = holds(lw, rep.bound1, tol)
            rep.bound2 = thm2_bound(beta, ls, consts.A_bar)
            rep.pass2 = holds(lw, rep.bound2, tol)
        if g.mean_kappa_minus > 0:
            try:
                rep.bound3 = thm3_bound(g.n, g.ricci_K_minus, g.mean_kappa_minus, beta, eta)
                rep.pass3 = holds(lw, rep.bound3, tol)
            except Inapplicable as exc:
                rep.bound3_note = str(exc)
        else:
            rep.bound3_note = "mean curvature lower bound is not positive"
        reports.append(rep)
    return reports


def verdict(reports: list[BoundReport]) -> bool:
    return all(r.ok for r in reports)
