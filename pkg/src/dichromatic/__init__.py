"""Trajectory representation of interference between two plane waves."""
from .errors import (
    DegenerateAmplitudes,
    DichromaticError,
    EmptyFamily,
    EmptyTable,
    InvalidProbe,
    InvalidRange,
    InvalidSpec,
    ReversedAmplitudes,
    ZeroGradient,
)
from .planar import PlanarSpec
from .wave_core import DichromaticSpec

__version__ = "0.1.0"

__all__ = [
    "DichromaticSpec",
    "PlanarSpec",
    "DichromaticError",
    "DegenerateAmplitudes",
    "ReversedAmplitudes",
    "InvalidSpec",
    "InvalidRange",
    "InvalidProbe",
    "EmptyFamily",
    "EmptyTable",
    "ZeroGradient",
]
