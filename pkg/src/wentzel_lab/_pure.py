"""Pure Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and the same rotation order, so both backends produce the
same eigenvalues up to rounding.
"""

from __future__ import annotations

import math

import numpy as np


def _off_norm(a: np.ndarray) -> float:
    return math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))


def jacobi_sweeps(a: np.ndarray, v: np.ndarray, tol: float, max_sweeps: int) -> tuple[int, float]:
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    off = _off_norm(a)
    sweep = 0
    while sweep < max_sweeps and off > tol * scale:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * abs(apq)
                app, aqq = a[p, p], a[q, q]
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweep += 1
        off = _off_norm(a)
    return sweep, off


def p1_stiffness(xy: np.ndarray, tri: np.ndarray):
    p = xy[tri]  # (nt, 3, 2)
    x, y = p[..., 0], p[..., 1]
    det = (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0])
    area = 0.5 * det
    by = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    bx = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    local = (by[:, :, None] * by[:, None, :] + bx[:, :, None] * bx[:, None, :]) / (4.0 * area)[:, None, None]
    rows = np.repeat(tri, 3, axis=1).reshape(-1).astype(np.int64)
    cols = np.tile(tri, (1, 3)).reshape(-1).astype(np.int64)
    return rows, cols, local.reshape(-1), area
