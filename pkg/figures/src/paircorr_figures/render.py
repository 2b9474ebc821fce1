"""Render pair-distance histogram CSVs as histogram-plus-theory-curve images.

The input is the CSV table produced by the ``paircorr pairs`` command:
comment lines starting with ``#`` followed by a header row with the columns

    bin_left, bin_right, count, relative_frequency, theory_pdf_at_midpoint

and one row per bin.  This module parses that schema on its own — it talks
to the producer only through the file format, never through its code.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DensityError, SchemaError

SCHEMA_COLUMNS = (
    "bin_left",
    "bin_right",
    "count",
    "relative_frequency",
    "theory_pdf_at_midpoint",
)

IMAGE_FORMATS = ("png", "svg")

#: Maximum tolerated deviation of the histogram area from 1.
DENSITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FigureSpec:
    """One figure: an input histogram CSV and the image to produce."""

    input_csv: str
    output_path: str
    title: str | None = None
    image_format: str = "png"
    dpi: int = 150

    def __post_init__(self) -> None:
        if self.image_format not in IMAGE_FORMATS:
            raise SchemaError(
                f"image format must be one of {IMAGE_FORMATS}, got {self.image_format!r}"
            )
        if not isinstance(self.dpi, int) or isinstance(self.dpi, bool) or self.dpi <= 0:
            raise SchemaError(f"dpi must be a positive integer, got {self.dpi!r}")


@dataclass(frozen=True)
class HistogramTable:
    """Parsed histogram rows plus the derived density values."""

    bin_left: np.ndarray
    bin_right: np.ndarray
    counts: np.ndarray
    relative_frequency: np.ndarray
    theory_pdf: np.ndarray
    comments: tuple[str, ...] = field(default=())

    @property
    def total_pairs(self) -> int:
        return int(self.counts.sum())

    @property
    def bin_widths(self) -> np.ndarray:
        return self.bin_right - self.bin_left

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.bin_left + self.bin_right)

    @property
    def density(self) -> np.ndarray:
        return self.relative_frequency / self.bin_widths


def read_pair_histogram(path: str) -> HistogramTable:
    """Parse a pair-histogram CSV, validating the schema as it goes."""
    comments: list[str] = []
    rows: list[list[str]] = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for record in csv.reader(_table_lines(fh, comments)):
                if record:
                    rows.append(record)
    except OSError as exc:
        raise SchemaError(f"cannot read {path!r}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path!r} has no header row")

    header = [name.strip() for name in rows[0]]
    missing = [name for name in SCHEMA_COLUMNS if name not in header]
    if missing:
        raise SchemaError(
            f"{path!r} is missing required columns {missing}; "
            f"expected {list(SCHEMA_COLUMNS)}, found {header}"
        )
    index = {name: header.index(name) for name in SCHEMA_COLUMNS}

    data = rows[1:]
    if not data:
        raise SchemaError(f"{path!r} has a header but no histogram rows")

    def column(name: str, kind):
        out = []
        for line_no, record in enumerate(data, start=2):
            if len(record) != len(header):
                raise SchemaError(
                    f"{path!r} row {line_no}: {len(record)} fields, header has {len(header)}"
                )
            token = record[index[name]]
            try:
                out.append(kind(token))
            except ValueError as exc:
                raise SchemaError(
                    f"{path!r} row {line_no}: column {name!r} value {token!r} "
                    f"is not a valid {kind.__name__}"
                ) from exc
        return np.asarray(out, dtype=np.int64 if kind is int else np.float64)

    table = HistogramTable(
        bin_left=column("bin_left", float),
        bin_right=column("bin_right", float),
        counts=column("count", int),
        relative_frequency=column("relative_frequency", float),
        theory_pdf=column("theory_pdf_at_midpoint", float),
        comments=tuple(comments),
    )
    if np.any(table.bin_widths <= 0.0):
        raise SchemaError(f"{path!r}: bin_right must exceed bin_left in every row")
    if np.any(table.counts < 0):
        raise SchemaError(f"{path!r}: counts must be non-negative")
    return table


def _table_lines(fh, comments: list[str]):
    for line in fh:
        if line.startswith("#"):
            comments.append(line.rstrip("\n"))
        elif line.strip():
            yield line


def check_density_normalization(table: HistogramTable) -> float:
    """Assert the histogram integrates to 1; returns the measured area.

    Skipped (returns 0.0) for histograms with zero pairs, which are rendered
    as empty axes instead.
    """
    if table.total_pairs == 0:
        return 0.0
    area = float(np.sum(table.density * table.bin_widths))
    if not math.isfinite(area) or abs(area - 1.0) > DENSITY_TOLERANCE:
        raise DensityError(
            f"histogram area is {area!r}, expected 1 within {DENSITY_TOLERANCE}; "
            "the relative_frequency column is not a probability distribution"
        )
    return area


def render(spec: FigureSpec) -> str:
    """Render one histogram CSV to an image; returns the output path."""
    table = read_pair_histogram(spec.input_csv)
    check_density_normalization(table)

    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    try:
        if table.total_pairs == 0:
            warnings.warn(
                f"{spec.input_csv!r} contains zero pairs; rendering empty axes",
                UserWarning,
                stacklevel=2,
            )
        else:
            ax.bar(
                table.bin_left,
                table.density,
                width=table.bin_widths,
                align="edge",
                color="#4878cf",
                edgecolor="none",
                label="empirical density",
            )
            ax.plot(
                table.midpoints,
                table.theory_pdf,
                color="#d1495b",
                linewidth=1.6,
                label="theory",
            )
            ax.legend(frameon=False)
        ax.set_xlabel(r"$\lambda$")
        ax.set_ylabel("density")
        ax.set_xlim(float(table.bin_left[0]), float(table.bin_right[-1]))
        ax.set_ylim(bottom=0.0)
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        fig.savefig(spec.output_path, format=spec.image_format, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return spec.output_path
