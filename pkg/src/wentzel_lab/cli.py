"""Command-line front end.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
configuration error.  Output is deterministic: fixed iteration order, floats
written with ``repr`` and no timestamps.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .bounds import SpectrumTriple
from .closed_form import Ball, boundary_volume, closed_form_spectra, geometry_of, parse_domain
from .svg import Series, loglog_svg

log = logging.getLogger("wentzel_lab")

VERIFY_DOMAINS = ("disk:1", "disk:2", "ball:3,1", "annulus:1,2", "ellipse:2,1")
IDENTITY_THRESHOLD = 1e-9
NA = "n/a"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    domains: list[str] = field(default_factory=lambda: ["disk:1"])
    betas: list[float] = field(default_factory=lambda: [1.0])
    count: int = 10
    refine: list[int] = field(default_factory=lambda: [2])
    quadrature: tuple[int, int] = (32, 64)
    tol: float | None = None
    out: str | None = None
    seed: int = 0
    overrides: list[dict] = field(default_factory=list)

    def validate(self) -> "RunConfig":
        if not self.domains:
            raise ConfigError("no domains given")
        for d in self.domains:
            try:
                parse_domain(d)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"domain {d!r}: {exc}") from None
        if not self.betas:
            raise ConfigError("beta list is empty")
        for b in self.betas:
            if not isinstance(b, (int, float)) or isinstance(b, bool) or not math.isfinite(b) or b < 0:
                raise ConfigError(f"beta must be a finite number >= 0, got {b!r}")
        if not isinstance(self.count, int) or isinstance(self.count, bool) or self.count < 1:
            raise ConfigError(f"count must be an integer >= 1, got {self.count!r}")
        if not self.refine or any(not isinstance(r, int) or r < 0 for r in self.refine):
            raise ConfigError(f"refinement levels must be integers >= 0, got {self.refine!r}")
        if list(self.refine) != sorted(set(self.refine)):
            raise ConfigError(f"refinement levels must be strictly ascending, got {self.refine!r}")
        if len(self.quadrature) != 2 or any(not isinstance(q, int) or q < 1 for q in self.quadrature):
            raise ConfigError(f"quadrature must be two positive integers, got {self.quadrature!r}")
        if self.tol is not None and (not isinstance(self.tol, (int, float)) or not self.tol > 0):
            raise ConfigError(f"tolerance must be positive, got {self.tol!r}")
        return self


_CONFIG_KEYS = {"domains", "betas", "count", "refine", "quadrature", "tol", "out", "seed", "overrides"}


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _parse_list(text: str, conv, what: str) -> list:
    try:
        return [conv(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse {what} list {text!r}") from None


def build_config(args: argparse.Namespace, defaults: dict) -> RunConfig:
    data = dict(defaults)
    if args.config:
        data.update(_load_json(args.config))
    if args.domain:
        data["domains"] = list(args.domain)
    if args.beta is not None:
        data["betas"] = _parse_list(args.beta, float, "beta")
    if args.count is not None:
        data["count"] = args.count
    if args.refine is not None:
        data["refine"] = _parse_list(args.refine, int, "refinement")
    if args.tol is not None:
        data["tol"] = args.tol
    if args.out is not None:
        data["out"] = args.out
    if args.seed is not None:
        data["seed"] = args.seed
    if "quadrature" in data:
        data["quadrature"] = tuple(data["quadrature"])
    if isinstance(data.get("domains"), str):
        data["domains"] = [data["domains"]]
    return RunConfig(**data).validate()


def _r(x) -> str:
    if x is None:
        return NA
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_r(v) for v in row])
    return buf.getvalue()


def _emit(cfg: RunConfig, name: str, text: str, stdout: bool = True) -> None:
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        with open(os.path.join(cfg.out, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif stdout:
        sys.stdout.write(text)


def _has_fem(domain) -> bool:
    return not isinstance(domain, Ball)


class _FemCache:
    def __init__(self):
        self._store = {}

    def get(self, domain, level: int):
        from .fem import FemSpectra
        from .fem.mesh import refinement

        key = (str(domain), level)
        if key not in self._store:
            log.info("meshing %s at level %d", domain, level)
            self._store[key] = FemSpectra(domain, *refinement(level))
        return self._store[key]


def _override(cfg: RunConfig, name: str, beta: float) -> SpectrumTriple | None:
    for o in cfg.overrides:
        try:
            if o["domain"] == name and float(o["beta"]) == beta:
                return SpectrumTriple(
                    float(beta),
                    tuple(map(float, o["steklov"])),
                    tuple(map(float, o["eta"])),
                    tuple(map(float, o["wentzel"])),
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed spectrum override: {exc}") from None
    return None


def _spectra_for(cfg, cache, name: str, beta: float, count: int) -> tuple[SpectrumTriple, str]:
    """Closed form when available, else FEM on the finest configured mesh."""
    ov = _override(cfg, name, beta)
    if ov is not None:
        return ov, "override"
    d = parse_domain(name)
    cf = closed_form_spectra(d, beta, count)
    if cf is not None:
        return cf, "closed_form"
    fs = cache.get(d, cfg.refine[-1])
    if count > fs.n_boundary:
        raise ConfigError(f"count {count} exceeds {fs.n_boundary} boundary vertices of the {d} mesh; raise --refine")
    return fs.triple(beta, count), "fem"


def cmd_spectra(cfg: RunConfig) -> int:
    cache = _FemCache()
    rows = []
    for name in cfg.domains:
        d = parse_domain(name)
        for beta in cfg.betas:
            cf = closed_form_spectra(d, beta, cfg.count)
            if cf is not None:
                for k in range(cfg.count):
                    rows.append([name, beta, k, cf.steklov[k], cf.eta[k], cf.wentzel[k], "closed_form", ""])
            if _has_fem(d):
                for level in cfg.refine:
                    fs = cache.get(d, level)
                    if cfg.count > fs.n_boundary:
                        raise ConfigError(f"count {cfg.count} exceeds {fs.n_boundary} boundary vertices at level {level}")
                    tr = fs.triple(beta, cfg.count)
                    mesh = f"{fs.mesh.n_vertices}v"
                    for k in range(cfg.count):
                        rows.append([name, beta, k, tr.steklov[k], tr.eta[k], tr.wentzel[k], "fem", f"level{level}:{mesh}"])
    _emit(cfg, "spectra.csv", _csv(["domain", "beta", "k", "lambda_S", "eta", "lambda_W", "source", "mesh"], rows))
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    cache = _FemCache()
    tol = cfg.tol if cfg.tol is not None else bounds.REL_TOL
    rows, violations = [], []
    n_checks = 0
    for name in cfg.domains:
        g = geometry_of(parse_domain(name))
        for beta in cfg.betas:
            tr, source = _spectra_for(cfg, cache, name, beta, cfg.count)
            for rep in bounds.verify(tr, g, tol):
                note = rep.bound3_note
                rows.append([
                    name, beta, rep.k, rep.lambda_w,
                    rep.lower, rep.lower_pass,
                    rep.bound1, rep.pass1, rep.bound2, rep.pass2,
                    rep.bound3, rep.pass3,
                    rep.weyl_lower, rep.weyl_lower_pass, source,
                ])
                n_checks += 1 + sum(p is not None for p in (rep.pass1, rep.pass2, rep.pass3))
                for check in rep.violations():
                    bound = {"lower": rep.lower, "thm1": rep.bound1, "thm2": rep.bound2, "thm3": rep.bound3}[check]
                    violations.append({
                        "domain": name, "beta": beta, "k": rep.k, "check": check,
                        "lambda_W": rep.lambda_w, "bound": bound,
                    })
                if note and rep.k == 0:
                    log.info("%s beta=%g: thm3 %s: %s", name, beta, NA, note)
    header = [
        "domain", "beta", "k", "lambda_W", "lower", "lower_pass", "bound1", "pass1",
        "bound2", "pass2", "bound3", "pass3", "weyl_lower", "weyl_lower_pass", "source",
    ]
    verdict = {"pass": not violations, "checks": n_checks, "tolerance": tol, "violations": violations}
    text = json.dumps(verdict, indent=2, sort_keys=True) + "\n"
    _emit(cfg, "verify.csv", _csv(header, rows))
    _emit(cfg, "verdict.json", text, stdout=False)
    if not cfg.out:
        sys.stderr.write(text)
    for v in violations:
        sys.stderr.write(f"violation: {v['check']} {v['domain']} beta={v['beta']!r} k={v['k']}\n")
    return 0 if not violations else 1


def weyl_fit(values, power: float) -> tuple[float, float, int, int]:
    """Affine least squares of ``values[k]`` against ``k**power`` over the top half of indices."""
    K = len(values) - 1
    k = np.arange(K // 2, K + 1)
    x = k.astype(float) ** power
    slope, intercept = np.polyfit(x, np.asarray(values, dtype=float)[k], 1)
    return float(slope), float(intercept), int(k[0]), int(k[-1])


def cmd_weyl(cfg: RunConfig) -> int:
    if cfg.count < 40:
        raise ConfigError(f"weyl needs count >= 40, got {cfg.count}")
    cache = _FemCache()
    rows = []
    series = []
    for name in cfg.domains:
        d = parse_domain(name)
        n = d.n if isinstance(d, Ball) else 2
        vol = boundary_volume(d)
        C = bounds.weyl_constant(n, vol)
        for beta in cfg.betas:
            tr, source = _spectra_for(cfg, cache, name, beta, cfg.count)
            ks = tuple(float(k) for k in range(1, cfg.count))
            s, c, k0, k1 = weyl_fit(tr.steklov, 1.0 / (n - 1))
            rows.append([name, beta, "steklov", s, C, abs(s - C) / C, c, k0, k1, source])
            series.append(Series(f"{name} steklov", ks, tr.steklov[1:]))
            series.append(Series(f"{name} C k^(1/(n-1))", ks, tuple(C * k ** (1 / (n - 1)) for k in ks), dashed=True))
            if beta > 0:
                pw = beta * C * C
                s, c, k0, k1 = weyl_fit(tr.wentzel, 2.0 / (n - 1))
                rows.append([name, beta, "wentzel", s, pw, abs(s - pw) / pw, c, k0, k1, source])
                series.append(Series(f"{name} wentzel beta={beta!r}", ks, tr.wentzel[1:]))
                series.append(
                    Series(f"{name} beta C^2 k^(2/(n-1))", ks, tuple(pw * k ** (2 / (n - 1)) for k in ks), dashed=True)
                )
    header = ["domain", "beta", "kind", "slope", "predicted", "rel_error", "intercept", "k_min", "k_max", "source"]
    _emit(cfg, "weyl.csv", _csv(header, rows))
    _emit(cfg, "weyl.svg", loglog_svg(series, "eigenvalues against leading-order growth"), stdout=False)
    return 0


def cmd_identity(cfg: RunConfig) -> int:
    from .identity_lab import QuadratureRule, identity_suite

    threshold = cfg.tol if cfg.tol is not None else IDENTITY_THRESHOLD
    rows = identity_suite(QuadratureRule(*cfg.quadrature))
    out = [[r.identity, r.domain, r.parameters, r.residual, r.order, r.residual <= threshold] for r in rows]
    _emit(cfg, "identity.csv", _csv(["identity", "domain", "parameters", "residual", "order", "pass"], out))
    bad = [r for r in rows if not r.residual <= threshold]
    for r in bad:
        sys.stderr.write(f"residual {r.residual!r} > {threshold!r}: {r.identity} {r.domain} {r.parameters}\n")
    return 1 if bad else 0


def cmd_mesh(cfg: RunConfig, check: str | None) -> int:
    from .fem.mesh import MeshError, gen_polar_mesh, load_mesh, refinement, save_mesh

    if check:
        try:
            with open(check, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read mesh {check}: {exc.strerror}") from None
        try:
            m = load_mesh(text)
        except MeshError as exc:
            raise ConfigError(f"{check}: {exc}") from None
        sys.stdout.write(
            f"ok: {m.n_vertices} vertices, {m.n_triangles} triangles, "
            f"{len(m.boundary_loops)} boundary loop(s), {len(m.boundary_vertices)} boundary vertices\n"
        )
        return 0
    for name in cfg.domains:
        d = parse_domain(name)
        if isinstance(d, Ball):
            raise ConfigError(f"no planar mesh for {name}")
        m = gen_polar_mesh(d, *refinement(cfg.refine[-1]))
        fname = f"mesh_{name.replace(':', '_').replace(',', '_')}.txt"
        _emit(cfg, fname, save_mesh(m))
    return 0


_DEFAULTS = {
    "spectra": {},
    "verify": {"domains": list(VERIFY_DOMAINS), "betas": [0.1, 1.0, 10.0], "count": 21},
    "weyl": {"count": 101},
    "identity": {},
    "mesh": {},
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wentzel-lab", description="Steklov/Wentzel spectra, eigenvalue bounds and identity checks.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("spectra", "closed-form and FEM spectra as CSV"),
        ("verify", "check every eigenvalue bound; CSV table and JSON verdict"),
        ("weyl", "leading-order growth fits; CSV and SVG"),
        ("identity", "quadrature residuals of the integral identities"),
        ("mesh", "emit or validate the mesh text format"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--config", metavar="PATH", help="JSON run configuration (flags override it)")
        s.add_argument("--out", metavar="DIR", help="write artifacts into DIR instead of stdout")
        s.add_argument("--domain", action="append", metavar="SPEC", help="e.g. disk:1, ball:3,1, annulus:1,2 (repeatable)")
        s.add_argument("--beta", metavar="LIST", help="comma-separated beta values")
        s.add_argument("--count", type=int, metavar="N", help="number of eigenvalues, including the zero one")
        s.add_argument("--refine", metavar="LIST", help="comma-separated ascending mesh levels (level L is 8*2^L x 32*2^L)")
        s.add_argument("--tol", type=float, metavar="X", help="relative certification tolerance, or residual threshold for identity")
        s.add_argument("--seed", type=int, metavar="N", help="reserved; every command is deterministic")
        if name == "mesh":
            s.add_argument("--check", metavar="PATH", help="validate a mesh file instead of generating one")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = build_config(args, _DEFAULTS[args.command])
        if args.command == "spectra":
            return cmd_spectra(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "weyl":
            return cmd_weyl(cfg)
        if args.command == "identity":
            return cmd_identity(cfg)
        return cmd_mesh(cfg, args.check)
    except (ConfigError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
