"""Planar triangle meshes: structured polar generation, validation, text I/O.

Text format::

    nv nt
    x y          (nv lines)
    i j k        (nt lines, 0-based, counterclockwise)

Boundary loops are not stored; they are recovered from edges that belong to
exactly one triangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..closed_form import Annulus, Disk, DomainSpec, Ellipse, Star

__all__ = [
    "Mesh",
    "MeshError",
    "MeshParseError",
    "OrientationError",
    "NonManifoldError",
    "DuplicateVertexError",
    "gen_polar_mesh",
    "load_mesh",
    "save_mesh",
    "refinement",
]


class MeshError(ValueError):
    pass


class MeshParseError(MeshError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class OrientationError(MeshError):
    def __init__(self, triangle: int, area: float):
        self.triangle = triangle
        super().__init__(f"triangle {triangle} is not counterclockwise (signed area {area!r})")


class NonManifoldError(MeshError):
    pass


class DuplicateVertexError(MeshError):
    pass


@dataclass(frozen=True, eq=False)
class Mesh:
    vertices: np.ndarray
    triangles: np.ndarray
    boundary_loops: tuple[np.ndarray, ...] = field(default=())

    @classmethod
    def build(cls, vertices, triangles) -> "Mesh":
        """Validate and derive boundary loops."""
        v = np.ascontiguousarray(vertices, dtype=np.float64)
        t = np.ascontiguousarray(triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise MeshError("vertices must be an (nv, 2) array")
        if t.ndim != 2 or t.shape[1] != 3:
            raise MeshError("triangles must be an (nt, 3) array")
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise MeshError("triangle references a missing vertex")
        _check_orientation(v, t)
        _check_duplicates(v)
        loops = _boundary_loops(t)
        return cls(v, t, loops)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def boundary_vertices(self) -> np.ndarray:
        return np.concatenate(self.boundary_loops) if self.boundary_loops else np.zeros(0, dtype=np.int64)

    def areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def diameter(self) -> float:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(np.hypot(*(hi - lo)))


def _check_orientation(v: np.ndarray, t: np.ndarray) -> None:
    p = v[t]
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    area = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    bad = np.flatnonzero(area <= 0)
    if bad.size:
        raise OrientationError(int(bad[0]), float(area[bad[0]]))


def _check_duplicates(v: np.ndarray) -> None:
    if len(v) < 2:
        return
    diam = float(np.hypot(*(v.max(axis=0) - v.min(axis=0))))
    pairs = cKDTree(v).query_pairs(1e-12 * diam)
    if pairs:
        i, j = min(pairs)
        raise DuplicateVertexError(f"vertices {i} and {j} coincide")


def _boundary_loops(t: np.ndarray) -> tuple[np.ndarray, ...]:
    directed = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    key = np.sort(directed, axis=1)
    uniq, inverse, counts = np.unique(key, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    if np.any(counts > 2):
        e = uniq[np.flatnonzero(counts > 2)[0]]
        raise NonManifoldError(f"edge ({e[0]}, {e[1]}) is shared by more than two triangles")
    bedges = directed[counts[inverse] == 1]
    succ: dict[int, int] = {}
    for a, b in bedges:
        a, b = int(a), int(b)
        if a in succ:
            raise NonManifoldError(f"boundary vertex {a} has two outgoing boundary edges")
        succ[a] = b
    if len(set(succ.values())) != len(succ):
        raise NonManifoldError("boundary vertex with two incoming boundary edges")
    loops = []
    seen: set[int] = set()
    for start in sorted(succ):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        cur = succ[start]
        while cur != start:
            if cur in seen or cur not in succ:
                raise NonManifoldError(f"boundary is not a set of closed loops near vertex {cur}")
            loop.append(cur)
            seen.add(cur)
            cur = succ[cur]
        loops.append(np.array(loop, dtype=np.int64))
    return tuple(loops)


def refinement(level: int, base: tuple[int, int] = (8, 32)) -> tuple[int, int]:
    """``(n_radial, n_angular)`` for a refinement level; level 3 is 64 x 256."""
    return base[0] * 2**level, base[1] * 2**level


def _ring_triangles(inner: np.ndarray, outer: np.ndarray) -> list[tuple[int, int, int]]:
    m = len(inner)
    tris = []
    for j in range(m):
        jn = (j + 1) % m
        a, b, c, d = inner[j], outer[j], outer[jn], inner[jn]
        tris.append((a, b, c))
        tris.append((a, c, d))
    return tris


def gen_polar_mesh(domain: DomainSpec, n_radial: int, n_angular: int) -> Mesh:
    """Structured mapped-polar mesh.

    Disk, ellipse and star use a center vertex fanned to the first ring and
    have ``n_radial * n_angular + 1`` vertices.  The annulus has
    ``(n_radial + 1) * n_angular`` vertices and two boundary loops.  Boundary
    vertices lie exactly on the analytic curve.
    """
    if n_radial < 2 or n_angular < 8:
        raise ValueError("need n_radial >= 2 and n_angular >= 8")
    theta = 2 * math.pi * np.arange(n_angular) / n_angular
    c, s = np.cos(theta), np.sin(theta)
    if isinstance(domain, Annulus):
        radii = domain.R_in + (domain.R_out - domain.R_in) * np.arange(n_radial + 1) / n_radial
        verts = np.concatenate([np.stack([r * c, r * s], axis=1) for r in radii])
        rings = [np.arange(i * n_angular, (i + 1) * n_angular) for i in range(n_radial + 1)]
        tris = []
        for i in range(n_radial):
            tris += _ring_triangles(rings[i], rings[i + 1])
        return Mesh.build(verts, np.array(tris))
    if isinstance(domain, Disk):
        bx, by = domain.R * c, domain.R * s
    elif isinstance(domain, Ellipse):
        bx, by = domain.a * c, domain.b * s
    elif isinstance(domain, Star):
        r = domain.radius(theta)
        bx, by = r * c, r * s
    else:
        raise ValueError(f"no polar mesh for {domain!r}")
    rho = np.arange(1, n_radial + 1) / n_radial
    rho[-1] = 1.0
    verts = [np.zeros((1, 2))]
    for f in rho:
        verts.append(np.stack([f * bx, f * by], axis=1))
    verts = np.concatenate(verts)
    rings = [np.arange(1 + i * n_angular, 1 + (i + 1) * n_angular) for i in range(n_radial)]
    tris = [(0, rings[0][j], rings[0][(j + 1) % n_angular]) for j in range(n_angular)]
    for i in range(n_radial - 1):
        tris += _ring_triangles(rings[i], rings[i + 1])
    return Mesh.build(verts, np.array(tris))


def save_mesh(mesh: Mesh) -> str:
    """Serialize with shortest round-trip float text."""
    lines = [f"{mesh.n_vertices} {mesh.n_triangles}"]
    lines += [f"{float(x)!r} {float(y)!r}" for x, y in mesh.vertices]
    lines += [f"{i} {j} {k}" for i, j, k in mesh.triangles]
    return "\n".join(lines) + "\n"


def load_mesh(text: str) -> Mesh:
    """Parse and validate the text format; errors carry the offending line."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise MeshParseError(1, "missing header 'nv nt'")
    head = lines[0].split()
    try:
        nv, nt = (int(x) for x in head)
    except ValueError:
        raise MeshParseError(1, f"header must be two integers, got {lines[0]!r}") from None
    if nv < 3 or nt < 1:
        raise MeshParseError(1, f"need nv >= 3 and nt >= 1, got {nv} {nt}")
    body = lines[1:]
    if len([ln for ln in body if ln.strip()]) != nv + nt or len(body) < nv + nt:
        raise MeshParseError(len(lines), f"expected {nv} vertex and {nt} triangle lines")
    verts = np.empty((nv, 2))
    for i in range(nv):
        parts = body[i].split()
        try:
            if len(parts) != 2:
                raise ValueError
            verts[i] = [float(parts[0]), float(parts[1])]
        except ValueError:
            raise MeshParseError(i + 2, f"vertex line must be 'x y', got {body[i]!r}") from None
        if not np.all(np.isfinite(verts[i])):
            raise MeshParseError(i + 2, "non-finite coordinate")
    tris = np.empty((nt, 3), dtype=np.int64)
    for i in range(nt):
        ln = nv + i
        parts = body[ln].split()
        try:
            if len(parts) != 3:
                raise ValueError
            tris[i] = [int(p) for p in parts]
        except ValueError:
            raise MeshParseError(ln + 2, f"triangle line must be 'i j k', got {body[ln]!r}") from None
        if tris[i].min() < 0 or tris[i].max() >= nv:
            raise MeshParseError(ln + 2, f"vertex index out of range in {body[ln]!r}")
    return Mesh.build(verts, tris)
