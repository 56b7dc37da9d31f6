"""Hot kernels with two interchangeable implementations.

``get(backend)`` returns the module holding ``chess_response``,
``separable_blur``, ``harris_response``, ``ptam_corners`` and ``nms_mask``.
"""

from __future__ import annotations

from types import ModuleType

from .._backend import resolve
from . import _numpy


def get(backend: str | None = None) -> ModuleType:
    name = resolve(backend)
    if name == "numba":
        from . import _numba

        return _numba
    return _numpy
