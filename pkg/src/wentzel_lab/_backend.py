"""Kernel backend selection.

The compiled extension is used when it imports; ``WENTZEL_LAB_PURE=1`` in the
environment forces the numpy fallback.  :func:`get` returns a named backend
explicitly so tests and the benchmark can compare both.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pure

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

HAVE_EXTENSION = _compiled is not None


def get(name: str | None = None) -> ModuleType:
    if name is None:
        name = "pure" if os.environ.get("WENTZEL_LAB_PURE") == "1" or _compiled is None else "compiled"
    if name == "pure":
        return _pure
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


ACTIVE = "pure" if get() is _pure else "compiled"
