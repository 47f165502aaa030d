"""Separable spectra for disks, balls and annuli; curvature data for test domains."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bounds import GeometryBounds, SpectrumTriple

__all__ = [
    "Disk",
    "Ball",
    "Annulus",
    "Ellipse",
    "Star",
    "DomainSpec",
    "parse_domain",
    "harmonic_dimension",
    "disk_spectra",
    "disk_wentzel_exact",
    "ball_spectra",
    "annulus_mode_matrices",
    "annulus_mode_eigs",
    "annulus_spectra",
    "geometry_of",
    "boundary_volume",
    "star_curvature_extrema",
    "closed_form_spectra",
]


@dataclass(frozen=True)
class Disk:
    R: float = 1.0

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("disk radius must be positive")

    def __str__(self) -> str:
        return f"disk:{self.R:g}"


@dataclass(frozen=True)
class Ball:
    n: int = 3
    R: float = 1.0

    def __post_init__(self):
        if self.n < 2 or not self.R > 0:
            raise ValueError("ball needs n >= 2 and R > 0")

    def __str__(self) -> str:
        return f"ball:{self.n},{self.R:g}"


@dataclass(frozen=True)
class Annulus:
    R_in: float = 1.0
    R_out: float = 2.0

    def __post_init__(self):
        if not 0 < self.R_in < self.R_out:
            raise ValueError("annulus needs 0 < R_in < R_out")

    def __str__(self) -> str:
        return f"annulus:{self.R_in:g},{self.R_out:g}"


@dataclass(frozen=True)
class Ellipse:
    a: float = 2.0
    b: float = 1.0

    def __post_init__(self):
        if not self.a >= self.b > 0:
            raise ValueError("ellipse needs a >= b > 0")

    def __str__(self) -> str:
        return f"ellipse:{self.a:g},{self.b:g}"


@dataclass(frozen=True)
class Star:
    """Polar graph ``r(theta) = R (1 + eps cos(m theta))``."""

    R: float = 1.0
    eps: float = 0.1
    m: int = 5

    def __post_init__(self):
        if not self.R > 0 or not 0 <= self.eps < 1 or self.m < 1:
            raise ValueError("star needs R > 0, 0 <= eps < 1, m >= 1")

    def radius(self, theta):
        return self.R * (1.0 + self.eps * np.cos(self.m * theta))

    def __str__(self) -> str:
        return f"star:{self.R:g},{self.eps:g},{self.m}"


DomainSpec = Disk | Ball | Annulus | Ellipse | Star


def parse_domain(text: str) -> DomainSpec:
    """Parse ``kind:p1,p2,...`` (e.g. ``annulus:1,2``, ``ball:3,1``)."""
    kind, _, params = text.strip().partition(":")
    vals = [p for p in params.split(",") if p.strip()] if params else []
    try:
        if kind == "disk":
            return Disk(*map(float, vals))
        if kind == "ball":
            return Ball(int(vals[0]), *map(float, vals[1:])) if vals else Ball()
        if kind == "annulus":
            return Annulus(*map(float, vals))
        if kind == "ellipse":
            return Ellipse(*map(float, vals))
        if kind == "star":
            nums = [float(v) for v in vals[:2]] + [int(v) for v in vals[2:]]
            return Star(*nums)
    except (TypeError, IndexError) as exc:
        raise ValueError(f"bad parameters for {kind!r}: {params!r}") from exc
    raise ValueError(f"unknown domain kind {kind!r}")


def harmonic_dimension(n: int, k: int) -> int:
    """Dimension of degree-k harmonic polynomials on R^n."""
    if k < 0:
        return 0
    top = math.comb(n + k - 1, k)
    low = math.comb(n + k - 3, k - 2) if k >= 2 else 0
    return top - low


def _flatten(modes, count: int) -> list:
    out = []
    for value, mult in modes:
        out.extend([value] * mult)
        if len(out) >= count:
            break
    return out[:count]


def disk_wentzel_exact(R: Fraction | int, beta: Fraction | int, count: int) -> list[Fraction]:
    """Disk Wentzel list in exact rational arithmetic."""
    R = Fraction(R)
    beta = Fraction(beta)
    modes = [(Fraction(0), 1)]
    k = 1
    while sum(m for _, m in modes) < count:
        modes.append((k / R + beta * k * k / (R * R), 2))
        k += 1
    return _flatten(modes, count)


def ball_spectra(n: int, R: float, beta: float, count: int) -> SpectrumTriple:
    """Spectra of the n-ball via spherical harmonics of degree k."""
    if count < 1:
        raise ValueError("count must be at least 1")
    st, et, wt = [], [], []
    k = 0
    while len(st) < count:
        mult = harmonic_dimension(n, k)
        lam = k / R
        eta = k * (k + n - 2) / R**2
        st.extend([lam] * mult)
        et.extend([eta] * mult)
        wt.extend([lam + beta * eta] * mult)
        k += 1
    return SpectrumTriple(float(beta), tuple(st[:count]), tuple(et[:count]), tuple(wt[:count]))


def disk_spectra(R: float, beta: float, count: int) -> SpectrumTriple:
    """Disk: Steklov ``k/R``, circle ``(k/R)^2``, Wentzel their beta-sum; k >= 1 doubly."""
    return ball_spectra(2, R, beta, count)


def annulus_mode_matrices(R_in: float, R_out: float, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Symmetric 2x2 forms of angular mode k on the boundary values ``(u_in, u_out)``.

    Returns ``(S, L, W)``: Dirichlet energy per unit angle, tangential energy,
    boundary mass.  Mode-k Wentzel eigenvalues solve ``(S + beta L) f = lam W f``.
    """
    W = np.diag([R_in, R_out])
    if k == 0:
        c = 1.0 / math.log(R_out / R_in)
        S = c * np.array([[1.0, -1.0], [-1.0, 1.0]])
        return S, np.zeros((2, 2)), W
    # u = A r^k + B r^-k; rows: boundary values, then outward normal derivatives
    ri, ro = R_in, R_out
    V = np.array([[ri**k, ri**-k], [ro**k, ro**-k]])
    D = k * np.array([[-(ri ** (k - 1)), ri ** (-k - 1)], [ro ** (k - 1), -(ro ** (-k - 1))]])
    N = D @ np.linalg.inv(V)
    S = W @ N
    S = 0.5 * (S + S.T)
    L = np.diag([k * k / R_in, k * k / R_out])
    return S, L, W


def annulus_mode_eigs(R_in: float, R_out: float, k: int, beta: float) -> np.ndarray:
    S, L, W = annulus_mode_matrices(R_in, R_out, k)
    w = 1.0 / np.sqrt(np.diag(W))
    M = (S + beta * L) * np.outer(w, w)
    return np.linalg.eigvalsh(M)


def _annulus_wentzel(R_in: float, R_out: float, beta: float, count: int) -> list[float]:
    vals: list[float] = []
    k = 0
    while True:
        e = annulus_mode_eigs(R_in, R_out, k, beta)
        # the lowest eigenvalue of each mode grows with k, so once it passes the
        # count-th collected value no later mode can contribute
        if len(vals) >= count and e[0] > sorted(vals)[count - 1]:
            break
        mult = 1 if k == 0 else 2
        for v in e:
            vals.extend([float(v)] * mult)
        k += 1
    vals.sort()
    vals[0] = 0.0
    return vals[:count]


def _circle_eta(R: float, jmax: int) -> list[float]:
    out = [0.0]
    for j in range(1, jmax + 1):
        out += [j * j / R**2] * 2
    return out


def annulus_spectra(R_in: float, R_out: float, beta: float, count: int) -> SpectrumTriple:
    """Annulus spectra by Fourier separation; the boundary is two circles."""
    if not 0 < R_in < R_out:
        raise ValueError("annulus needs 0 < R_in < R_out")
    if count < 1:
        raise ValueError("count must be at least 1")
    steklov = _annulus_wentzel(R_in, R_out, 0.0, count)
    wentzel = steklov if beta == 0 else _annulus_wentzel(R_in, R_out, beta, count)
    jmax = count // 2 + 1
    eta = sorted(_circle_eta(R_in, jmax) + _circle_eta(R_out, jmax))[:count]
    return SpectrumTriple(float(beta), tuple(steklov), tuple(eta), tuple(wentzel))


def closed_form_spectra(d: DomainSpec, beta: float, count: int) -> SpectrumTriple | None:
    if isinstance(d, Disk):
        return disk_spectra(d.R, beta, count)
    if isinstance(d, Ball):
        return ball_spectra(d.n, d.R, beta, count)
    if isinstance(d, Annulus):
        return annulus_spectra(d.R_in, d.R_out, beta, count)
    return None


def _star_curvature(s: Star, theta: np.ndarray) -> np.ndarray:
    r = s.radius(theta)
    dr = -s.R * s.eps * s.m * np.sin(s.m * theta)
    ddr = -s.R * s.eps * s.m**2 * np.cos(s.m * theta)
    return (r * r + 2 * dr * dr - r * ddr) / (r * r + dr * dr) ** 1.5


def star_curvature_extrema(s: Star, samples: int = 4096) -> tuple[float, float, float]:
    """``(kappa_min, kappa_max, error_estimate)`` by dense sampling.

    The error estimate compares ``samples`` with ``samples/2`` after a
    Richardson step (sampled extrema converge at second order).
    """

    def ext(n):
        th = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        k = _star_curvature(s, th)
        return float(k.min()), float(k.max())

    lo1, hi1 = ext(samples // 2)
    lo2, hi2 = ext(samples)
    lo_x = lo2 + (lo2 - lo1) / 3.0
    hi_x = hi2 + (hi2 - hi1) / 3.0
    err = max(abs(lo_x - lo2), abs(hi_x - hi2))
    return lo2, hi2, err


def _star_reach(s: Star, samples: int = 4096, chunk: int = 512) -> float:
    # largest inscribed tangent-ball radius, minimised over boundary points
    th = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    r = s.radius(th)
    dr = -s.R * s.eps * s.m * np.sin(s.m * th)
    p = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    tang = np.stack([dr * np.cos(th) - r * np.sin(th), dr * np.sin(th) + r * np.cos(th)], axis=1)
    tang /= np.linalg.norm(tang, axis=1)[:, None]
    normal = np.stack([tang[:, 1], -tang[:, 0]], axis=1)  # outward for a CCW curve
    best = math.inf
    for i0 in range(0, samples, chunk):
        pi = p[i0 : i0 + chunk]
        ni = normal[i0 : i0 + chunk]
        diff = pi[:, None, :] - p[None, :, :]
        dist2 = np.einsum("ijk,ijk->ij", diff, diff)
        proj = np.einsum("ijk,ik->ij", diff, ni)
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = np.where(proj > 1e-14, dist2 / (2.0 * proj), np.inf)
        best = min(best, float(rho.min()))
    return best


def geometry_of(d: DomainSpec) -> GeometryBounds:
    """Curvature bounds and rolling radius of a flat test domain."""
    if isinstance(d, Disk):
        k = 1.0 / d.R
        return GeometryBounds(2, 0.0, 0.0, k, k, d.R, 0.0, k)
    if isinstance(d, Ball):
        k = 1.0 / d.R
        return GeometryBounds(d.n, 0.0, 0.0, k, k, d.R, 0.0, k)
    if isinstance(d, Annulus):
        return GeometryBounds(2, 0.0, 0.0, -1.0 / d.R_in, 1.0 / d.R_out, (d.R_out - d.R_in) / 2.0, 0.0, -1.0 / d.R_in)
    if isinstance(d, Ellipse):
        kmin = d.b / d.a**2
        return GeometryBounds(2, 0.0, 0.0, kmin, d.a / d.b**2, d.b**2 / d.a, 0.0, kmin)
    if isinstance(d, Star):
        kmin, kmax, _ = star_curvature_extrema(d)
        roll = min(1.0 / kmax, _star_reach(d))
        return GeometryBounds(2, 0.0, 0.0, kmin, kmax, roll, 0.0, kmin)
    raise TypeError(f"unsupported domain {d!r}")


def boundary_volume(d: DomainSpec) -> float:
    """Length (n=2) or area of the boundary."""
    if isinstance(d, Disk):
        return 2 * math.pi * d.R
    if isinstance(d, Ball):
        return 2 * math.pi ** (d.n / 2) / math.gamma(d.n / 2) * d.R ** (d.n - 1)
    if isinstance(d, Annulus):
        return 2 * math.pi * (d.R_in + d.R_out)
    if isinstance(d, Ellipse):
        from scipy.special import ellipe

        return 4 * d.a * float(ellipe(1.0 - (d.b / d.a) ** 2))
    if isinstance(d, Star):
        from scipy.integrate import quad

        def speed(t):
            r = float(d.radius(t))
            dr = -d.R * d.eps * d.m * math.sin(d.m * t)
            return math.hypot(r, dr)

        return quad(speed, 0.0, 2 * math.pi, limit=200)[0]
    raise TypeError(f"unsupported domain {d!r}")
