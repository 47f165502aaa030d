import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wentzel_lab.closed_form import Annulus, Ball, Disk
from wentzel_lab.identity_lab import (
    Poly,
    QuadratureRule,
    TestFunction,
    catalog,
    divergence_theorem_oracle,
    harmonic,
    hess_eta_polar_check,
    identity_suite,
    poh_residual,
    poh_terms,
    reilly_residual,
    reilly_terms,
)

DISK = Disk(1.0)


def tf(text, dim=2):
    return TestFunction(text, Poly.parse(text, dim))


class TestQuadrature:
    @pytest.mark.parametrize("p", [0, 1, 5, 12, 20])
    @pytest.mark.parametrize("q", [0, 2, 7, 10])
    def test_disk_exactness(self, p, q):
        pts, w, r = QuadratureRule().shell(2, 0.0, 1.0)
        th = np.arctan2(pts[:, 1], pts[:, 0])
        got = np.sum(w * r**p * np.cos(q * th))
        exact = 2 * math.pi / (p + 2) if q == 0 else 0.0
        assert abs(got - exact) <= 1e-12

    def test_weights_positive(self):
        for dim in (2, 3):
            _, w, _ = QuadratureRule().shell(dim, 0.5, 1.0)
            assert np.all(w > 0)

    def test_sphere_area(self):
        _, w = QuadratureRule().boundary(3, 2.0)
        assert w.sum() == pytest.approx(16 * math.pi, rel=1e-13)

    def test_ball_volume_moment(self):
        pts, w, _ = QuadratureRule().shell(3, 0.0, 1.0)
        assert np.sum(w * pts[:, 2] ** 2) == pytest.approx(4 * math.pi / 15, rel=1e-13)

    def test_invalid(self):
        with pytest.raises(ValueError):
            QuadratureRule(0, 4)


class TestFunctions:
    def test_parse(self):
        p = Poly.parse("x2 - 3x1y2 + 0.5z", 3)
        assert p.terms == {(2, 0, 0): 1.0, (1, 2, 0): -3.0, (0, 0, 1): 0.5}
        assert p.degree == 3

    @pytest.mark.parametrize("k", range(9))
    def test_harmonic_family(self, k):
        u = harmonic(k)
        pts = np.random.default_rng(k).uniform(-1, 1, (50, 2))
        assert np.abs(u.laplacian(pts)).max() <= 1e-12
        r, th = np.hypot(pts[:, 0], pts[:, 1]), np.arctan2(pts[:, 1], pts[:, 0])
        assert np.allclose(u.value(pts), r**k * np.cos(k * th), atol=1e-12)

    def test_derivatives(self):
        f = tf("x3y-2y2+1")
        p = np.array([[0.3, -0.7]])
        assert np.allclose(f.gradient(p), [[3 * 0.09 * -0.7, 0.027 + 2.8]])
        assert np.allclose(f.hessian(p), [[[6 * 0.3 * -0.7, 0.27], [0.27, -4.0]]])
        assert f.laplacian(p)[0] == pytest.approx(6 * 0.3 * -0.7 - 4.0)

    def test_catalog_degrees(self):
        assert all(f.poly.degree <= 4 for f in catalog(2) + catalog(3))


class TestPoh:
    def test_constant(self):
        t = poh_terms(DISK, harmonic(0), 0.5)
        assert (t.lhs, t.rhs, t.residual) == (0.0, 0.0, 0.0)

    def test_linear(self):
        t = poh_terms(DISK, harmonic(1), 0.5)
        # int |grad_G u|^2 = int (d_n u)^2 = pi on the unit circle
        assert t.tangential == pytest.approx(math.pi, rel=1e-14)
        assert t.residual <= 1e-10

    @pytest.mark.parametrize("h", [0.1, 0.3, 0.5])
    def test_cubic_stable(self, h):
        assert poh_residual(DISK, harmonic(3), h) <= 1e-9

    @pytest.mark.parametrize("f", catalog(2), ids=lambda f: f.tag)
    @pytest.mark.parametrize("h", [0.2, 0.7])
    def test_non_harmonic_form(self, f, h):
        assert poh_residual(DISK, f, h, beta=2.0) <= 1e-12

    def test_sign_of_hessian_term(self):
        # the tube term vanishes for harmonic u on the disk, so use the ball
        t = poh_terms(Ball(3, 1.0), tf("x", 3), 0.5)
        flipped = abs(t.lhs - (t.normal - t.tube + t.source)) / t.scale
        assert t.residual <= 1e-12
        assert flipped > 0.1

    def test_errors(self):
        with pytest.raises(ValueError):
            poh_residual(DISK, harmonic(1), 1.0)
        with pytest.raises(ValueError):
            poh_residual(DISK, harmonic(1), 0.0)
        with pytest.raises(TypeError):
            poh_residual(Annulus(1.0, 2.0), harmonic(1), 0.1)


class TestReilly:
    def test_linear(self):
        t = reilly_terms(DISK, tf("x"))
        assert t.interior_lap == 0.0 and t.interior_hess == 0.0
        assert abs(t.rhs) <= 1e-12

    def test_harmonic_quadratic(self):
        t = reilly_terms(DISK, tf("x2-y2"))
        assert t.lhs == pytest.approx(-8 * math.pi, rel=1e-13)
        assert t.residual <= 1e-10

    def test_radial_quadratic(self):
        t = reilly_terms(DISK, tf("x2+y2"))
        assert t.interior_lap == pytest.approx(16 * math.pi, rel=1e-13)
        assert t.lhs == pytest.approx(8 * math.pi, rel=1e-13)
        assert t.residual <= 1e-10

    @pytest.mark.parametrize("d", [Disk(1.0), Disk(2.5), Ball(3, 1.0), Ball(3, 0.5)], ids=str)
    def test_catalog(self, d):
        dim = 3 if isinstance(d, Ball) else 2
        for f in catalog(dim):
            assert reilly_residual(d, f) <= 1e-9, f.tag

    @pytest.mark.parametrize("k", range(1, 9))
    def test_harmonic_reduced_form(self, k):
        t = reilly_terms(DISK, harmonic(k))
        assert abs(t.interior_lap) <= 1e-12 * t.scale
        assert abs(-t.interior_hess - t.rhs) / t.scale <= 1e-12

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            reilly_residual(Ball(3, 1.0), tf("x"))


class TestHessEta:
    def test_deviation(self):
        assert hess_eta_polar_check(1.0, 0.5, 1000) <= 1e-12

    @given(st.floats(0.5, 3.0), st.floats(0.05, 0.95))
    def test_random_tubes(self, R, frac):
        assert hess_eta_polar_check(R, frac * R, 50) <= 1e-12

    def test_invalid(self):
        with pytest.raises(ValueError):
            hess_eta_polar_check(1.0, 1.0)


class TestDivergence:
    def test_radial_field(self):
        x, y = Poly.parse("x", 2), Poly.parse("y", 2)
        assert divergence_theorem_oracle(DISK, (x, y)) <= 1e-14

    def test_constant_field(self):
        c = Poly.parse("3", 2)
        assert divergence_theorem_oracle(DISK, (c, c.scale(-2))) <= 1e-14

    def test_weighted_gradient(self):
        # F = r^2 grad(r^2 cos 2t) = r^2 (2x, -2y)
        gx = Poly.parse("2x", 2).times_r2()
        gy = Poly.parse("-2y", 2).times_r2()
        assert divergence_theorem_oracle(DISK, (gx, gy)) <= 1e-10

    def test_ball(self):
        f = (Poly.parse("x3", 3), Poly.parse("y z2", 3), Poly.parse("z4", 3))
        assert divergence_theorem_oracle(Ball(3, 1.3), f) <= 1e-12


class TestSuite:
    def test_default(self):
        rows = identity_suite()
        assert max(r.residual for r in rows) <= 1e-9
        assert any(r.identity == "reilly" and r.domain == "ball:3,1" for r in rows)
        assert sum(r.identity == "poh" for r in rows) == 27

    def test_order_doubling_stays_converged(self):
        base = identity_suite(QuadratureRule(16, 32))
        fine = identity_suite(QuadratureRule(32, 64))
        assert [r.identity for r in base] == [r.identity for r in fine]
        assert all(r.residual <= 1e-9 for r in fine)
        assert {r.order for r in fine if r.identity != "hess_eta"} == {"32x64"}
