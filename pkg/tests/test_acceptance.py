"""Acceptance criteria, one test each, each printing a single PASS/FAIL line."""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from wentzel_lab.bounds import derive_constants, thm3_bound, verify
from wentzel_lab.cli import main, weyl_fit
from wentzel_lab.closed_form import Ball, Disk, ball_spectra, disk_spectra, disk_wentzel_exact, geometry_of
from wentzel_lab.fem import FemSpectra
from wentzel_lab.fem.mesh import refinement
from wentzel_lab.identity_lab import identity_suite
from wentzel_lab.model_geometry import arccot, riccati_closed, riccati_numeric


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")


def test_1_closed_form(capsys):
    t0 = time.perf_counter()
    disk_ok = disk_wentzel_exact(1, 1, 7) == [Fraction(v) for v in (0, 2, 2, 6, 6, 12, 12)]
    ball_ok = True
    for beta in (Fraction(1), Fraction(1, 2), Fraction(3)):
        b = float(beta)
        expect = [0.0] + [1 + 2 * b] * 3 + [2 + 6 * b] * 5
        ball_ok &= list(ball_spectra(3, 1.0, b, 9).wentzel) == expect
    dt = time.perf_counter() - t0
    ok = disk_ok and ball_ok and dt < 1.0
    report(capsys, 1, ok, f"disk exact={disk_ok} ball={ball_ok} runtime={dt:.3f}s")
    assert ok


def test_2_fem_convergence(capsys):
    t0 = time.perf_counter()
    errs = {"steklov": [], "wentzel": []}
    for level in (1, 2, 3):
        fs = FemSpectra(Disk(1.0), *refinement(level))
        errs["steklov"].append(abs(fs.steklov()[1] - 1.0) / 1.0)
        errs["wentzel"].append(abs(fs.wentzel(1.0)[1] - 2.0) / 2.0)
    dt = time.perf_counter() - t0
    ok = dt < 60.0
    parts = []
    for name, e in errs.items():
        orders = [math.log2(e[i] / e[i + 1]) for i in range(2)]
        ok &= e[-1] <= 0.01 and min(orders) >= 1.5
        parts.append(f"{name} err64x256={e[-1]:.2e} orders={orders[0]:.2f},{orders[1]:.2f}")
    report(capsys, 2, ok, "; ".join(parts) + f"; runtime={dt:.1f}s")
    assert ok


def test_3_theorem_suite(capsys, tmp_path):
    t0 = time.perf_counter()
    code = main(["verify", "--out", str(tmp_path)])
    capsys.readouterr()
    verdict = json.loads((tmp_path / "verdict.json").read_text())
    sharp = []
    for d, eta1 in ((Disk(1.0), 1.0), (Ball(3, 1.0), 2.0)):
        g = geometry_of(d)
        for beta in (0.1, 1.0, 10.0):
            tr = disk_spectra(1.0, beta, 2) if isinstance(d, Disk) else ball_spectra(3, 1.0, beta, 2)
            rep = verify(tr, g)[1]
            sharp.append(abs((rep.bound3 - beta * eta1) - (rep.lambda_w - beta * eta1)))
    dt = time.perf_counter() - t0
    by_check = {}
    for v in verdict["violations"]:
        by_check.setdefault(v["check"], set()).add(v["domain"])
    ok = code == 0 and max(sharp) <= 1e-10 and dt < 120.0
    summary = ", ".join(f"{c} on {'/'.join(sorted(ds))}" for c, ds in sorted(by_check.items())) or "none"
    report(
        capsys, 3, ok,
        f"exit={code} violations: {summary}; thm3 sharpness slack={max(sharp):.1e}; runtime={dt:.1f}s",
    )
    assert max(sharp) <= 1e-10
    assert dt < 120.0
    assert code == 0, f"violated inequalities: {summary}"


def test_4_weyl(capsys):
    tr = disk_spectra(1.0, 1.0, 101)
    s, _, k0, k1 = weyl_fit(tr.steklov, 1.0)
    w, _, _, _ = weyl_fit(tr.wentzel, 2.0)
    C2 = 0.5
    ok = (k0, k1) == (50, 100) and abs(s - C2) <= 0.05 * C2 and abs(w - C2**2) <= 0.05 * C2**2
    report(capsys, 4, ok, f"k in [{k0},{k1}] steklov slope={s:.4f} (C2=0.5) wentzel slope={w:.4f} (beta C2^2=0.25)")
    assert ok


def test_5_identities(capsys):
    t0 = time.perf_counter()
    rows = identity_suite()
    worst = {}
    for r in rows:
        worst[r.identity] = max(worst.get(r.identity, 0.0), r.residual)
    dt = time.perf_counter() - t0
    n_poh = sum(r.identity == "poh" for r in rows)
    ok = (
        worst["poh"] <= 1e-9 and n_poh == 27
        and worst["reilly"] <= 1e-9
        and worst["hess_eta"] <= 1e-12
        and dt < 30.0
    )
    report(capsys, 5, ok, " ".join(f"{k}={v:.1e}" for k, v in worst.items()) + f" runtime={dt:.2f}s")
    assert ok


def test_6_riccati(capsys):
    rng = np.random.default_rng(20260601)
    worst = 0.0
    for _ in range(100):
        K, a0 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        sol = riccati_closed(K, a0)
        t_end = min(0.9 * float(sol.pole_time), 2.0)
        path = riccati_numeric(K, a0, t_end, 1e-3)
        worst = max(worst, float(np.max(np.abs(path.a - sol(path.t)))))
    agree = worst <= 1e-6

    mono = True
    for _ in range(100):
        K2, a2 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        K1, a1 = K2 + rng.uniform(0, 2), a2 - rng.uniform(0, 2)
        s1, s2 = riccati_closed(K1, a1), riccati_closed(K2, a2)
        mono &= s1.pole_time <= s2.pole_time
        end = min(float(s1.pole_time), float(s2.pole_time), 3.0)
        t = np.linspace(0, 0.99 * end, 200)
        mono &= bool(np.all(s1(t) <= s2(t) + 1e-9))

    pole_err = 0.0
    for kp in rng.uniform(0.1, 5, 20):
        pole_err = max(pole_err, abs(riccati_closed(0.0, -kp).pole_time.value - 1 / kp))
        for K in rng.uniform(0.1, 5, 5):
            expect = arccot(kp / math.sqrt(K)) / math.sqrt(K)
            pole_err = max(pole_err, abs(riccati_closed(K, -kp).pole_time.value - expect))
    ok = agree and mono and pole_err <= 1e-10
    report(capsys, 6, ok, f"RK4 max diff={worst:.1e} comparison={mono} pole err={pole_err:.1e}")
    assert ok


def test_7_determinism(capsys, tmp_path):
    outs = []
    for d in ("a", "b"):
        main(["verify", "--out", str(tmp_path / d)])
        outs.append({p.name: p.read_bytes() for p in sorted((tmp_path / d).iterdir())})
    capsys.readouterr()
    ok = outs[0] == outs[1] and set(outs[0]) == {"verify.csv", "verdict.json"}
    report(capsys, 7, ok, f"files={sorted(outs[0])} identical={outs[0] == outs[1]}")
    assert ok


def test_constants_used_by_suite():
    # guards the theorem suite against silent geometry changes
    assert derive_constants(geometry_of(Disk(1.0))).B_bar == 4.0
    assert thm3_bound(2, 0.0, 1.0, 0.0, 1.0) == 1.0
