"""Backend selection for the hot loops.

The compiled extension is preferred when it was built; set
``ORTHRANGE_BACKEND=python`` to force the interpreted twin.  Structures bind
the backend that was active when they were built.
"""
import os
from contextlib import contextmanager

from . import _kernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

_BACKENDS = {"python": python_backend}
if compiled_backend is not None:
    _BACKENDS["c"] = compiled_backend


def available() -> list:
    return sorted(_BACKENDS)


def _initial():
    want = os.environ.get("ORTHRANGE_BACKEND", "auto")
    if want == "auto":
        return "c" if "c" in _BACKENDS else "python"
    if want not in _BACKENDS:
        raise RuntimeError(f"kernel backend {want!r} unavailable; have {available()}")
    return want


_active = _initial()


def name() -> str:
    return _active


def get():
    return _BACKENDS[_active]


def set_backend(which: str):
    global _active
    if which not in _BACKENDS:
        raise RuntimeError(f"kernel backend {which!r} unavailable; have {available()}")
    _active = which


@contextmanager
def backend(which: str):
    prev = _active
    set_backend(which)
    try:
        yield get()
    finally:
        set_backend(prev)
