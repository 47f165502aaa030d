import os
import subprocess
import sys

import pytest

from wentzel_lab import _backend


def active_in_subprocess(env_value):
    env = dict(os.environ)
    env.pop("WENTZEL_LAB_PURE", None)
    if env_value is not None:
        env["WENTZEL_LAB_PURE"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "import wentzel_lab; print(wentzel_lab.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


def test_env_forces_pure():
    assert active_in_subprocess("1") == "pure"


def test_default_prefers_extension():
    assert active_in_subprocess(None) == ("compiled" if _backend.HAVE_EXTENSION else "pure")


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get("fortran")


def test_pure_pipeline_end_to_end():
    from wentzel_lab.closed_form import Disk
    from wentzel_lab.fem.dtn import assemble, solve_spectrum
    from wentzel_lab.fem.mesh import gen_polar_mesh

    s = assemble(gen_polar_mesh(Disk(1.0), 4, 16), backend="pure")
    w = solve_spectrum(s, 1.0, 3, backend="pure").values
    assert w[0] == pytest.approx(0.0, abs=1e-10)
    assert w[1] == pytest.approx(2.0, rel=0.05)
