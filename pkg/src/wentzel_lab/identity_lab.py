"""Quadrature checks of the integral identities behind the Wentzel bounds.

All derivatives are exact (polynomial test functions).  Laplacians in this
module use the analyst's sign, ``lap f = sum of second derivatives``; where
the geometric identities are stated with ``Delta = -div grad`` the sign is
folded in explicitly, so each identity below is written in divergence form.

Identities checked, for a flat ball or disk of radius R:

* tube identity, ``eta = (h - d_G)^2 / 2`` on the tube ``M_h``::

      b int_G |grad_G u|^2 = b int_G (d_n u)^2
                             + (b/h) int_{M_h} |grad u|^2 div grad eta - 2 Hess eta(grad u, grad u)
                             - (2b/h) int_{M_h} <grad eta, grad u> lap u

  The last term vanishes for harmonic u.  On the disk the tube term also
  integrates to zero for harmonic u, so the non-harmonic form is what
  actually pins down the sign of the Hessian term.

* Reilly, with H the trace of the second fundamental form::

      int_M (lap f)^2 - |Hess f|^2 = int_G H v^2 + 2 v lap_G z + II(grad_G z, grad_G z)

  where ``z = f|_G``, ``v = d_n f``.  With ``Delta_G = -lap_G`` this is the
  familiar ``... - 2 v Delta_G z ...`` form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .closed_form import Ball, Disk
from .model_geometry import hessian_eta_eigs

__all__ = [
    "Poly",
    "TestFunction",
    "QuadratureRule",
    "harmonic",
    "POLY_CATALOG_2D",
    "POLY_CATALOG_3D",
    "catalog",
    "poh_residual",
    "poh_terms",
    "PohTerms",
    "ReillyTerms",
    "reilly_residual",
    "reilly_terms",
    "hess_eta_polar_check",
    "divergence_theorem_oracle",
    "IdentityRow",
    "identity_suite",
]


class Poly:
    """Polynomial in ``dim`` variables stored as ``{exponents: coefficient}``."""

    def __init__(self, terms: dict[tuple[int, ...], float], dim: int):
        self.dim = dim
        self.terms = {e: float(c) for e, c in terms.items() if c != 0}

    @classmethod
    def parse(cls, text: str, dim: int) -> "Poly":
        """Parse sums of monomials like ``"x2 - 3x1y2 + 0.5z"`` (exponent after letter)."""
        names = "xyz"[:dim]
        terms: dict[tuple[int, ...], float] = {}
        for raw in text.replace("-", "+-").split("+"):
            tok = raw.replace(" ", "")
            if not tok:
                continue
            sign = -1.0 if tok.startswith("-") else 1.0
            tok = tok.lstrip("-")
            i = 0
            while i < len(tok) and (tok[i].isdigit() or tok[i] == "."):
                i += 1
            coef = float(tok[:i]) if i else 1.0
            exps = [0] * dim
            rest = tok[i:]
            j = 0
            while j < len(rest):
                var = names.index(rest[j])
                j += 1
                k = j
                while k < len(rest) and rest[k].isdigit():
                    k += 1
                exps[var] += int(rest[j:k]) if k > j else 1
                j = k
            key = tuple(exps)
            terms[key] = terms.get(key, 0.0) + sign * coef
        return cls(terms, dim)

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[:-1])
        for e, c in self.terms.items():
            term = np.full(pts.shape[:-1], c)
            for a, p in enumerate(e):
                if p:
                    term = term * pts[..., a] ** p
            out = out + term
        return out

    def diff(self, axis: int) -> "Poly":
        terms: dict[tuple[int, ...], float] = {}
        for e, c in self.terms.items():
            if e[axis]:
                ne = list(e)
                ne[axis] -= 1
                terms[tuple(ne)] = terms.get(tuple(ne), 0.0) + c * e[axis]
        return Poly(terms, self.dim)

    def __add__(self, other: "Poly") -> "Poly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0.0) + c
        return Poly(terms, self.dim)

    def scale(self, s: float) -> "Poly":
        return Poly({e: s * c for e, c in self.terms.items()}, self.dim)

    def times_r2(self) -> "Poly":
        out = Poly({}, self.dim)
        for a in range(self.dim):
            unit = [0] * self.dim
            unit[a] = 2
            sq = tuple(unit)
            out = out + Poly({tuple(x + y for x, y in zip(e, sq)): c for e, c in self.terms.items()}, self.dim)
        return out

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def laplacian(self) -> "Poly":
        out = Poly({}, self.dim)
        for a in range(self.dim):
            out = out + self.diff(a).diff(a)
        return out


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A named polynomial with exact derivative evaluators."""

    __test__ = False  # not a pytest class

    tag: str
    poly: Poly

    @property
    def dim(self) -> int:
        return self.poly.dim

    def value(self, pts):
        return self.poly(pts)

    def gradient(self, pts):
        return np.stack([self.poly.diff(a)(pts) for a in range(self.dim)], axis=-1)

    def hessian(self, pts):
        d = self.dim
        rows = [[self.poly.diff(a).diff(b)(pts) for b in range(d)] for a in range(d)]
        return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)

    def laplacian(self, pts):
        return self.poly.laplacian()(pts)

    def boundary_parts(self, pts, R: float):
        """On the sphere |x| = R: ``(z, v, grad_G z, lap_G z)`` with analyst's lap_G."""
        n = pts / R
        g = self.gradient(pts)
        v = np.einsum("...i,...i->...", g, n)
        tang = g - v[..., None] * n
        H = self.hessian(pts)
        nHn = np.einsum("...i,...ij,...j->...", n, H, n)
        lap_g = self.laplacian(pts) - nHn - (self.dim - 1) / R * v
        return self.value(pts), v, tang, lap_g


def harmonic(k: int) -> TestFunction:
    """``r^k cos(k theta) = Re (x + i y)^k``."""
    terms = {}
    for j in range(0, k + 1, 2):
        terms[(k - j, j)] = math.comb(k, j) * (-1) ** (j // 2)
    return TestFunction(f"r^{k}cos{k}t", Poly(terms, 2))


POLY_CATALOG_2D = ("x", "x2+y2", "x2-y2", "xy", "x3-3xy2", "x2y+y3", "x4", "x2y2+x", "x3y-2y2+1")
POLY_CATALOG_3D = ("x", "x2+y2+z2", "x2-y2", "xyz", "z3+xy", "x4", "x2z2-y")


def catalog(dim: int) -> list[TestFunction]:
    names = POLY_CATALOG_2D if dim == 2 else POLY_CATALOG_3D
    return [TestFunction(s, Poly.parse(s, dim)) for s in names]


@lru_cache(maxsize=64)
def _gl(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor Gauss-Legendre rule in polar (or spherical) coordinates."""

    radial: int = 32
    angular: int = 64

    def __post_init__(self):
        if self.radial < 1 or self.angular < 1:
            raise ValueError("orders must be positive")

    @property
    def order(self) -> str:
        return f"{self.radial}x{self.angular}"

    def doubled(self) -> "QuadratureRule":
        return QuadratureRule(2 * self.radial, 2 * self.angular)

    def _sphere(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        # unit directions and weights summing to the unit sphere's area
        th, wt = _gl(self.angular, 0.0, 2 * math.pi)
        if dim == 2:
            return np.stack([np.cos(th), np.sin(th)], axis=1), wt
        ct, wc = _gl(self.angular, -1.0, 1.0)
        st = np.sqrt(1.0 - ct * ct)
        dirs = np.stack(
            [np.outer(st, np.cos(th)), np.outer(st, np.sin(th)), np.outer(ct, np.ones_like(th))], axis=-1
        ).reshape(-1, 3)
        return dirs, np.outer(wc, wt).reshape(-1)

    def shell(self, dim: int, r0: float, r1: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Points, weights and radii for ``r0 <= |x| <= r1``."""
        r, wr = _gl(self.radial, r0, r1)
        dirs, wd = self._sphere(dim)
        pts = r[:, None, None] * dirs[None, :, :]
        w = (wr * r ** (dim - 1))[:, None] * wd[None, :]
        rr = np.broadcast_to(r[:, None], w.shape)
        return pts.reshape(-1, dim), w.reshape(-1), rr.reshape(-1)

    def boundary(self, dim: int, R: float) -> tuple[np.ndarray, np.ndarray]:
        dirs, wd = self._sphere(dim)
        return R * dirs, wd * R ** (dim - 1)


def _domain_dim_radius(domain) -> tuple[int, float]:
    if isinstance(domain, Disk):
        return 2, domain.R
    if isinstance(domain, Ball):
        return domain.n, domain.R
    raise TypeError(f"identities are implemented on disks and balls, got {domain!r}")


def _residual(lhs: float, rhs: float, scale: float) -> float:
    if scale == 0.0:
        return abs(lhs - rhs)
    return abs(lhs - rhs) / scale


@dataclass(frozen=True)
class PohTerms:
    tangential: float
    normal: float
    tube: float
    source: float
    scale: float

    @property
    def lhs(self) -> float:
        return self.tangential

    @property
    def rhs(self) -> float:
        return self.normal + self.tube + self.source

    @property
    def residual(self) -> float:
        return _residual(self.lhs, self.rhs, self.scale)


def poh_terms(domain, u: TestFunction, h: float, beta: float = 1.0, rule: QuadratureRule | None = None) -> PohTerms:
    dim, R = _domain_dim_radius(domain)
    if not 0 < h < R:
        raise ValueError(f"tube width must lie in (0, {R}), got {h}")
    if u.dim != dim:
        raise ValueError("test function dimension does not match the domain")
    rule = rule or QuadratureRule()
    bp, bw = rule.boundary(dim, R)
    _, v, tang, _ = u.boundary_parts(bp, R)
    tangential = beta * float(np.sum(bw * np.einsum("ij,ij->i", tang, tang)))
    normal = beta * float(np.sum(bw * v * v))

    tp, tw, r = rule.shell(dim, R - h, R)
    g = u.gradient(tp)
    d = r - R + h  # |grad eta|, distance to the inner level set
    gr = np.einsum("ij,ij->i", g, tp) / r
    g2 = np.einsum("ij,ij->i", g, g)
    div_grad_eta = 1.0 + (dim - 1) * d / r
    hess_eta_gg = gr * gr + (d / r) * (g2 - gr * gr)
    a = g2 * div_grad_eta
    b = 2.0 * hess_eta_gg
    c = -2.0 * d * gr * u.laplacian(tp)
    tube = beta / h * float(np.sum(tw * (a - b)))
    source = beta / h * float(np.sum(tw * c))
    scale = abs(tangential) + abs(normal) + beta / h * float(np.sum(tw * (np.abs(a) + np.abs(b) + np.abs(c))))
    return PohTerms(tangential, normal, tube, source, scale)


def poh_residual(domain, u: TestFunction, h: float, beta: float = 1.0, rule: QuadratureRule | None = None) -> float:
    """Normalized mismatch of the tube decomposition of the boundary energy.

    The normalization is the sum of the absolute integrals of every term, so
    an identity whose terms all vanish reports 0 rather than 0/0.
    """
    return poh_terms(domain, u, h, beta, rule).residual


@dataclass(frozen=True)
class ReillyTerms:
    interior_lap: float
    interior_hess: float
    mean_curv: float
    cross: float
    second_form: float
    scale: float

    @property
    def lhs(self) -> float:
        return self.interior_lap - self.interior_hess

    @property
    def rhs(self) -> float:
        return self.mean_curv + self.cross + self.second_form

    @property
    def residual(self) -> float:
        return _residual(self.lhs, self.rhs, self.scale)


def reilly_terms(domain, f: TestFunction, rule: QuadratureRule | None = None) -> ReillyTerms:
    dim, R = _domain_dim_radius(domain)
    if f.dim != dim:
        raise ValueError("test function dimension does not match the domain")
    rule = rule or QuadratureRule()
    pts, w, _ = rule.shell(dim, 0.0, R)
    lap = f.laplacian(pts)
    H = f.hessian(pts)
    hess2 = np.einsum("...ij,...ij->...", H, H)
    bp, bw = rule.boundary(dim, R)
    _, v, tang, lap_g = f.boundary_parts(bp, R)
    mean_trace = (dim - 1) / R
    t1 = mean_trace * v * v
    t2 = 2.0 * v * lap_g
    t3 = np.einsum("ij,ij->i", tang, tang) / R
    return ReillyTerms(
        float(np.sum(w * lap * lap)),
        float(np.sum(w * hess2)),
        float(np.sum(bw * t1)),
        float(np.sum(bw * t2)),
        float(np.sum(bw * t3)),
        float(np.sum(w * (lap * lap + hess2)) + np.sum(bw * (np.abs(t1) + np.abs(t2) + t3))),
    )


def reilly_residual(domain, f: TestFunction, rule: QuadratureRule | None = None) -> float:
    """Normalized mismatch of Reilly's formula on a flat disk or ball (Ric = 0)."""
    return reilly_terms(domain, f, rule).residual


def hess_eta_polar_check(R: float, h: float, samples: int = 1000, seed: int = 0) -> float:
    """Max deviation between the Cartesian Hessian spectrum of ``(r - R + h)^2/2``
    and the tangential/normal eigenvalue rule ``(t kappa(t), 1)``."""
    if not 0 < h < R:
        raise ValueError(f"need 0 < h < R, got h={h}, R={R}")
    rng = np.random.default_rng(seed)
    r = np.linspace(R - h, R, samples)
    r[0] = max(r[0], 1e-300)
    th = rng.uniform(0.0, 2 * math.pi, samples)
    worst = 0.0
    for ri, ti in zip(r, th):
        rhat = np.array([math.cos(ti), math.sin(ti)])
        d = ri - R + h
        P = np.outer(rhat, rhat)
        hess = P + (d / ri) * (np.eye(2) - P)
        eig = np.linalg.eigvalsh(hess)
        s = R - ri
        rule = hessian_eta_eigs(max(d, 0.0), [1.0 / (R - s)])
        worst = max(worst, float(np.max(np.abs(np.sort(rule.rho) - eig))))
    return worst


def divergence_theorem_oracle(domain, field: tuple[Poly, ...], rule: QuadratureRule | None = None) -> float:
    """``|int div F - int_G F.n|`` normalized by the absolute integrals."""
    dim, R = _domain_dim_radius(domain)
    if len(field) != dim:
        raise ValueError("vector field has the wrong number of components")
    rule = rule or QuadratureRule()
    pts, w, _ = rule.shell(dim, 0.0, R)
    div = sum(field[a].diff(a)(pts) for a in range(dim))
    bp, bw = rule.boundary(dim, R)
    flux = sum(field[a](bp) * bp[:, a] / R for a in range(dim))
    lhs = float(np.sum(w * div))
    rhs = float(np.sum(bw * flux))
    scale = float(np.sum(w * np.abs(div)) + np.sum(bw * np.abs(flux)))
    return _residual(lhs, rhs, scale)


@dataclass(frozen=True)
class IdentityRow:
    identity: str
    domain: str
    parameters: str
    residual: float
    order: str


def identity_suite(rule: QuadratureRule | None = None, widths=(0.1, 0.3, 0.5), kmax: int = 8) -> list[IdentityRow]:
    """Full identity suite in a fixed order."""
    rule = rule or QuadratureRule()
    rows = []
    disk = Disk(1.0)
    for k in range(kmax + 1):
        u = harmonic(k)
        for h in widths:
            rows.append(IdentityRow("poh", str(disk), f"u={u.tag};h={h!r};beta=1.0", poh_residual(disk, u, h, 1.0, rule), rule.order))
    for dom in (disk, Ball(3, 1.0)):
        dim, _ = _domain_dim_radius(dom)
        for f in catalog(dim):
            rows.append(IdentityRow("reilly", str(dom), f"f={f.tag}", reilly_residual(dom, f, rule), rule.order))
    rows.append(IdentityRow("hess_eta", str(disk), "h=0.5;samples=1000", hess_eta_polar_check(1.0, 0.5), "closed-form"))
    x, y = Poly.parse("x", 2), Poly.parse("y", 2)
    rows.append(IdentityRow("divergence", str(disk), "F=(x,y)", divergence_theorem_oracle(disk, (x, y), rule), rule.order))
    return rows
