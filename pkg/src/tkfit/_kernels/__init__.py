"""Kernel dispatch: ``K`` is the active backend module."""

from .._accel import USE_NUMBA
from . import _numpy

if USE_NUMBA:
    from . import _numba

    K = _numba
else:
    _numba = None
    K = _numpy

__all__ = ["K", "_numpy", "_numba"]
