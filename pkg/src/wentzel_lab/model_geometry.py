"""Jacobi and Riccati comparison functions for constant-curvature model spaces.

Everything here is scalar and closed form.  ``sn``/``cs`` solve the Jacobi
equation ``u'' + kappa u = 0``; a Riccati solution of ``a' + a^2 + K = 0`` is
the logarithmic derivative of ``cs_K + a0 sn_K``, which gives one formula for
every sign of ``K`` and a single pole finder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ExtReal",
    "INF",
    "sn",
    "cs",
    "horizon",
    "arccot",
    "RiccatiSolution",
    "RiccatiPath",
    "riccati_closed",
    "riccati_numeric",
    "h_tilde",
    "MeanCurvatureFloor",
    "mean_curvature_floor",
    "HessEtaSpectrum",
    "hessian_eta_eigs",
]


@dataclass(frozen=True, order=False)
class ExtReal:
    """A value in ``(-inf, +inf]`` with an explicit infinity tag.

    ``float(ExtReal.inf())`` is ``math.inf`` so the value can be fed to numpy,
    but code that cares about the distinction should test :attr:`is_finite`.
    """

    value: float = 0.0
    infinite: bool = False

    @classmethod
    def inf(cls) -> "ExtReal":
        return cls(0.0, True)

    @classmethod
    def finite(cls, value: float) -> "ExtReal":
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"finite ExtReal needs a finite float, got {value!r}")
        return cls(value, False)

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    def reciprocal(self) -> float:
        """``1/x`` with ``1/inf = 0``.  Zero has no reciprocal here."""
        if self.infinite:
            return 0.0
        if self.value == 0.0:
            raise ZeroDivisionError("reciprocal of finite zero")
        return 1.0 / self.value

    def __float__(self) -> float:
        return math.inf if self.infinite else self.value

    def _key(self, other) -> tuple[float, float]:
        o = other if isinstance(other, ExtReal) else ExtReal.finite(other)
        return float(self), float(o)

    def __lt__(self, other) -> bool:
        a, b = self._key(other)
        return a < b

    def __le__(self, other) -> bool:
        a, b = self._key(other)
        return a <= b

    def __gt__(self, other) -> bool:
        a, b = self._key(other)
        return a > b

    def __ge__(self, other) -> bool:
        a, b = self._key(other)
        return a >= b

    def __repr__(self) -> str:
        return "ExtReal(+inf)" if self.infinite else f"ExtReal({self.value!r})"

    def __str__(self) -> str:
        return "inf" if self.infinite else repr(self.value)


INF = ExtReal.inf()


def sn(kappa: float, t):
    """Sine-like Jacobi solution: ``sn(0) = 0``, ``sn'(0) = 1``."""
    if kappa > 0:
        r = math.sqrt(kappa)
        return np.sin(r * t) / r
    if kappa < 0:
        r = math.sqrt(-kappa)
        return np.sinh(r * t) / r
    return t * 1.0


def cs(kappa: float, t):
    """Cosine-like Jacobi solution: ``cs(0) = 1``, ``cs'(0) = 0``."""
    if kappa > 0:
        return np.cos(math.sqrt(kappa) * t)
    if kappa < 0:
        return np.cosh(math.sqrt(-kappa) * t)
    return np.ones_like(t) * 1.0 if isinstance(t, np.ndarray) else 1.0


def horizon(kappa: float) -> tuple[ExtReal, ExtReal]:
    """First zeros of ``sn`` and ``cs``: ``(pi/sqrt(kappa), pi/(2 sqrt(kappa)))``."""
    if kappa > 0:
        r = math.sqrt(kappa)
        return ExtReal.finite(math.pi / r), ExtReal.finite(math.pi / (2.0 * r))
    return INF, INF


def arccot(x: float) -> float:
    """Inverse cotangent with range ``(0, pi)``; continuous through ``x = 0``."""
    return math.pi / 2.0 - math.atan(x)


def _first_pole(K: float, a0: float) -> ExtReal:
    # first t > 0 with cs_K(t) + a0 sn_K(t) = 0
    if K > 0:
        r = math.sqrt(K)
        return ExtReal.finite(arccot(-a0 / r) / r)
    if K == 0:
        pole = -1.0 / a0 if a0 < 0 else math.inf
        return ExtReal.finite(pole) if math.isfinite(pole) else INF
    r = math.sqrt(-K)
    if a0 < -r:
        return ExtReal.finite(math.atanh(-r / a0) / r)
    return INF


@dataclass(frozen=True)
class RiccatiSolution:
    """Maximal solution of ``a' + a^2 + K = 0`` with ``a(0) = a0``."""

    K: float
    a0: float
    pole_time: ExtReal = field(default=INF)

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0):
            raise ValueError("Riccati solution is defined for t >= 0 only")
        if self.pole_time.is_finite and np.any(t_arr >= self.pole_time.value):
            raise ValueError(
                f"t beyond the pole at {self.pole_time.value!r} (K={self.K}, a0={self.a0})"
            )
        K, a0 = self.K, self.a0
        if K < 0:
            # tanh form avoids cosh overflow for long intervals
            r = math.sqrt(-K)
            ratio = np.tanh(r * t_arr) / r
            out = (a0 - K * ratio) / (1.0 + a0 * ratio)
        else:
            c = cs(K, t_arr)
            s = sn(K, t_arr)
            out = (a0 * c - K * s) / (c + a0 * s)
        if np.ndim(t) == 0:
            out = float(out)
            if t_arr == 0:
                return self.a0
        return out

    def derivative(self, t):
        a = np.asarray(self.eval(t))
        return -a * a - self.K


def riccati_closed(K: float, a0: float) -> RiccatiSolution:
    """Closed-form Riccati solution ``(a0 cs - K sn)/(cs + a0 sn)`` and its pole."""
    K = float(K)
    a0 = float(a0)
    return RiccatiSolution(K, a0, _first_pole(K, a0))


@dataclass(frozen=True)
class RiccatiPath:
    """Sampled RK4 path.  ``blow_up_time`` is set when ``|a|`` crossed the cap."""

    t: np.ndarray
    a: np.ndarray
    blow_up_time: float | None = None

    @property
    def blew_up(self) -> bool:
        return self.blow_up_time is not None

    def at(self, t: float) -> float:
        """Value at a grid time (nearest sample)."""
        i = int(np.argmin(np.abs(self.t - t)))
        return float(self.a[i])


BLOW_UP_CAP = 1e8


def _rk4_step(f, y: float, h: float) -> float:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _bisect_zero(f, b: float, h: float) -> float:
    # shortest RK4 step from b < 0 that reaches b = 0
    lo, hi = 0.0, h
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _rk4_step(f, b, mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16:
            break
    return 0.5 * (lo + hi)


def riccati_numeric(K: float, a0: float, t_end: float, step: float, cap: float = BLOW_UP_CAP) -> RiccatiPath:
    """Integrate ``a' = -a^2 - K`` with classical RK4 on ``[0, t_end]``.

    Steps from ``|a| > 1`` are taken in ``b = 1/a``, which solves
    ``b' = 1 + K b^2`` and stays smooth where ``a`` blows up, so the path is
    accurate right up to a pole.  Once ``|a| > cap`` the path stops and the
    pole (the zero of ``b``) is reported as ``blow_up_time`` rather than raised.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")

    def fa(a):
        return -a * a - K

    def fb(b):
        return 1.0 + K * b * b

    n = int(math.ceil(t_end / step - 1e-12))
    h = t_end / n if n > 0 else 0.0
    ts = [0.0]
    vals = [float(a0)]
    a = float(a0)
    blow = None
    for i in range(n):
        if abs(a) <= 1.0:
            a = _rk4_step(fa, a, h)
        else:
            b = 1.0 / a
            nb = _rk4_step(fb, b, h)
            if b < 0.0 <= nb:
                blow = i * h + _bisect_zero(fb, b, h)
                break
            a = 1.0 / nb
        if abs(a) > cap:
            # keep going in b until it reaches zero
            b, t = 1.0 / a, (i + 1) * h
            while blow is None:
                nb = _rk4_step(fb, b, h)
                if nb >= 0.0:
                    blow = t + _bisect_zero(fb, b, h)
                b, t = nb, t + h
            break
        ts.append((i + 1) * h)
        vals.append(a)
    return RiccatiPath(np.array(ts), np.array(vals), blow)



def h_tilde(K_plus: float, kappa_plus: float) -> ExtReal:
    """Tube width below which the squared-distance Hessian stays controlled.

    ``K_plus == 0`` gives ``1/max(0, kappa_plus)`` with ``1/0 = +inf``;
    otherwise ``arccot(kappa_plus/sqrt|K_plus|)/sqrt|K_plus|`` (as printed,
    i.e. with ``|K_plus|`` also for negative curvature).
    """
    if K_plus == 0:
        m = max(0.0, float(kappa_plus))
        return INF if m == 0.0 else ExtReal.finite(1.0 / m)
    r = math.sqrt(abs(K_plus))
    return ExtReal.finite(arccot(kappa_plus / r) / r)


@dataclass(frozen=True)
class MeanCurvatureFloor:
    value: float
    uniform: float
    mu: RiccatiSolution


def mean_curvature_floor(K_minus: float, kappa_minus: float, h: float) -> MeanCurvatureFloor:
    """Lower bound ``-mu(h)`` on the mean curvature of the parallel surface at depth h.

    ``mu`` solves ``mu' + mu^2 + K_minus = 0``, ``mu(0) = -kappa_minus``.  The
    h-independent floor ``-(sqrt|K_minus| + |kappa_minus|)`` is returned too.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    mu = riccati_closed(K_minus, -kappa_minus)
    if mu.pole_time.is_finite and h >= mu.pole_time.value:
        raise ValueError(f"h={h} is beyond the comparison pole {mu.pole_time.value}")
    uniform = -(math.sqrt(abs(K_minus)) + abs(kappa_minus))
    return MeanCurvatureFloor(-mu.eval(h), uniform, mu)


@dataclass(frozen=True)
class HessEtaSpectrum:
    rho: tuple[float, ...]
    t: float
    admissible: bool


def hessian_eta_eigs(t: float, curvatures) -> HessEtaSpectrum:
    """Eigenvalues of ``Hess(d_h^2/2)`` at distance ``t`` from the inner level set.

    Tangential eigenvalues are ``t*kappa_i``; the normal one is exactly 1.
    ``admissible`` is False when some ``t*kappa_i > 1``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    tang = sorted(float(t) * float(k) for k in curvatures)
    admissible = all(r <= 1.0 for r in tang)
    return HessEtaSpectrum(tuple(tang) + (1.0,), float(t), admissible)
