"""Numerical workbench for ``|p1^c + p2^c + p3^c - N| < eps`` with ``p1 = x^2 + y^2 + 1``."""

from ._accel import backend_name
from .errors import CapacityError, ParameterError, QuadratureError, TrendError

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ParameterError",
    "QuadratureError",
    "TrendError",
    "backend_name",
]
