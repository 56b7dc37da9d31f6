"""Selects between the numba-compiled kernels and the pure-numpy fallback.

Set ``CHESSDET_DISABLE_NUMBA=1`` in the environment before import to force
the numpy path. Both paths produce bit-identical integer output.
"""

from __future__ import annotations

import os

_FALSY = {"", "0", "false", "no", "off"}


def _env_disabled() -> bool:
    return os.environ.get("CHESSDET_DISABLE_NUMBA", "").strip().lower() not in _FALSY


try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _env_disabled()


def resolve(backend: str | None) -> str:
    """Map ``None``/"auto" to the active backend name; validate explicit names."""
    if backend is None or backend == "auto":
        return "numba" if USE_NUMBA else "numpy"
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return backend
    if backend == "numpy":
        return backend
    raise ValueError(f"unknown backend {backend!r}; expected 'numba', 'numpy' or 'auto'")
