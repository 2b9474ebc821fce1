"""Histogram-plus-theory-curve figures from pair-distance CSV files."""

from .errors import DensityError, FigureError, SchemaError
from .render import (
    DENSITY_TOLERANCE,
    IMAGE_FORMATS,
    SCHEMA_COLUMNS,
    FigureSpec,
    HistogramTable,
    check_density_normalization,
    read_pair_histogram,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "DENSITY_TOLERANCE",
    "DensityError",
    "FigureError",
    "FigureSpec",
    "HistogramTable",
    "IMAGE_FORMATS",
    "SCHEMA_COLUMNS",
    "SchemaError",
    "check_density_normalization",
    "read_pair_histogram",
    "render",
    "__version__",
]
