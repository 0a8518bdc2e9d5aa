"""Kernel backend selection.

The enumeration kernels exist twice: numba-jitted (default when numba is
importable) and pure numpy.  ORBIT_ATLAS_BACKEND=numpy|numba overrides the
choice; both backends produce identical partitions.
"""

from __future__ import annotations

import os

from .errors import OrbitAtlasError

ENV_BACKEND = "ORBIT_ATLAS_BACKEND"


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if _numba_available() else ("numpy",)


def resolve_backend(name: str | None = None) -> str:
    name = name or os.environ.get(ENV_BACKEND)
    if name is None:
        return "numba" if _numba_available() else "numpy"
    name = name.strip().lower()
    if name not in ("numba", "numpy"):
        raise OrbitAtlasError(f"unknown backend {name!r}; use numba or numpy")
    if name == "numba" and not _numba_available():
        raise OrbitAtlasError("numba backend requested but numba is not importable")
    return name


def kernels(name: str | None = None):
    resolved = resolve_backend(name)
    if resolved == "numba":
        from . import _kernels_numba as mod
    else:
        from . import _kernels_numpy as mod
    return mod
