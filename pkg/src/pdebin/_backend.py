"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise the
numpy fallback. Setting ``PDEBIN_PURE_PYTHON=1`` forces the fallback.
Callers always go through ``_backend.kernels`` so a swap via
:func:`set_backend` takes effect everywhere.
"""
import contextlib
import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and not os.environ.get("PDEBIN_PURE_PYTHON"):
    kernels = _compiled
else:
    kernels = _fallback


def available():
    names = ["python"]
    if _compiled is not None:
        names.append("cython")
    return names


def set_backend(name):
    global kernels
    if name == "python":
        kernels = _fallback
    elif name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        kernels = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


@contextlib.contextmanager
def using(name):
    previous = kernels
    set_backend(name)
    try:
        yield
    finally:
        globals()["kernels"] = previous


def current():
    return kernels.NAME
