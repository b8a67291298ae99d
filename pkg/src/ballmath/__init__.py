"""
ballmath: elementary functions with rigorous midpoint-radius enclosures
for precisions from 2 to about 4096 bits.

Evaluation entry points take a BigFloat and a precision p and return a
Ball (y, z) with f(x) in [y - z, y + z].  Internally everything runs in
fixed-point limb arithmetic: table-based argument reduction followed by
rectangular-splitting Taylor evaluation, with every rounding charged to
an explicit ulp budget.
"""

from .bigfloat import BigFloat, Ball, parse_number
from .errors import (BallmathError, DomainError, InvalidInput,
                     UnsupportedArgument, UnsupportedPrecision)
from .functions import atan_ball, cos_ball, exp_ball, log_ball, sin_ball, \
    sin_cos_ball, get_constant

__all__ = [
    "BigFloat", "Ball", "parse_number",
    "atan_ball", "exp_ball", "log_ball", "sin_ball", "cos_ball",
    "sin_cos_ball", "get_constant",
    "BallmathError", "DomainError", "InvalidInput", "UnsupportedArgument",
    "UnsupportedPrecision",
]

__version__ = "0.1.0"
