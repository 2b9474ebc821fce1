"""Empirical pair-distance distributions over lattice point sets.

Exact mode enumerates all unordered distinct pairs (quadratic — capped);
sampled mode draws ordered pairs with replacement from seeded, blocked
streams so histograms are reproducible bit-for-bit under any worker count.
Distances are integer squared norms until a single final square root, making
bin assignment deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from . import pointsets, theory
from ._rng import block_stream, resolve_workers, sample_blocks
from .errors import BudgetExceededError, DomainError
from .pointsets import LatticePointSet

__all__ = [
    "DEFAULT_EXACT_CAP",
    "DEFAULT_BINS",
    "PairHistogram",
    "GofReport",
    "exact_histogram",
    "sampled_histogram",
    "ks_compare",
    "pair_count_in_region",
    "write_histogram_csv",
    "HISTOGRAM_CSV_COLUMNS",
]

# All-pairs work is O(N^2); 20k points = 2e8 distance evaluations.
DEFAULT_EXACT_CAP = 20_000
DEFAULT_BINS = 200

MODE_EXACT = "exact"
MODE_SAMPLED = "sampled"

HISTOGRAM_CSV_COLUMNS = (
    "bin_left",
    "bin_right",
    "count",
    "relative_frequency",
    "theory_pdf_at_midpoint",
)

_CHUNK_ROWS = 1024


@dataclass(frozen=True, eq=False)
class PairHistogram:
    """Binned normalized pair distances lambda = |x - y| / R on [0, 2]."""

    n: int
    radius: float
    bin_edges: np.ndarray
    counts: np.ndarray
    total_pairs: int
    mode: str
    seed: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise DomainError(f"dimension n must be an integer >= 1, got {self.n!r}")
        if not (isinstance(self.radius, (int, float)) and float(self.radius) > 0):
            raise DomainError(f"radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "radius", float(self.radius))
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        if edges.ndim != 1 or edges.size < 2:
            raise DomainError("bin_edges must be a 1-d array with at least 2 entries")
        if not np.all(np.diff(edges) > 0):
            raise DomainError("bin_edges must be strictly increasing")
        if edges[0] != 0.0 or abs(edges[-1] - 2.0) > 1e-9:
            raise DomainError("bin_edges must start at 0 and end at 2 (within roundoff)")
        object.__setattr__(self, "bin_edges", edges)
        counts = np.asarray(self.counts)
        if not np.issubdtype(counts.dtype, np.integer):
            raise DomainError("counts must be integers")
        counts = counts.astype(np.int64)
        if counts.ndim != 1 or counts.size != edges.size - 1:
            raise DomainError("counts must have exactly len(bin_edges) - 1 entries")
        if np.any(counts < 0):
            raise DomainError("counts must be nonnegative")
        object.__setattr__(self, "counts", counts)
        if not isinstance(self.total_pairs, int) or self.total_pairs < 0:
            raise DomainError(f"total_pairs must be a nonnegative integer, got {self.total_pairs!r}")
        if int(counts.sum()) != self.total_pairs:
            raise DomainError(
                f"sum(counts)={int(counts.sum())} != total_pairs={self.total_pairs}"
            )
        if self.mode not in (MODE_EXACT, MODE_SAMPLED):
            raise DomainError(f"mode must be 'exact' or 'sampled', got {self.mode!r}")
        if self.mode == MODE_SAMPLED:
            if not isinstance(self.seed, int) or isinstance(self.seed, bool):
                raise DomainError("sampled histograms require an integer seed")
        elif self.seed is not None:
            raise DomainError("exact histograms carry no seed")

    @property
    def bin_widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def relative_frequencies(self) -> np.ndarray:
        if self.total_pairs == 0:
            return np.zeros_like(self.bin_edges[:-1])
        return self.counts / self.total_pairs

    @property
    def empirical_cdf(self) -> np.ndarray:
        """Cumulative relative frequency at each bin edge (leading 0)."""
        if self.total_pairs == 0:
            return np.zeros_like(self.bin_edges)
        return np.concatenate(([0.0], np.cumsum(self.counts) / self.total_pairs))


@dataclass(frozen=True)
class GofReport:
    """Outcome of a goodness-of-fit comparison against the theory CDF."""

    statistic_kind: str
    statistic: float
    sample_size: int
    threshold: float
    passed: bool

    def __post_init__(self) -> None:
        if self.statistic_kind not in ("ks", "chi_square"):
            raise DomainError(f"unknown statistic kind {self.statistic_kind!r}")
        if self.passed != (self.statistic <= self.threshold):
            raise DomainError("pass flag inconsistent with statistic vs threshold")

    def to_json_dict(self) -> dict:
        return {
            "kind": self.statistic_kind,
            "statistic": self.statistic,
            "sample_size": self.sample_size,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def _uniform_edges(bins: int) -> np.ndarray:
    if not isinstance(bins, int) or isinstance(bins, bool) or bins < 1:
        raise DomainError(f"bins must be an integer >= 1, got {bins!r}")
    return np.linspace(0.0, 2.0, bins + 1)


def _bin_squared_distances(d2: np.ndarray, scale: float, bins: int) -> np.ndarray:
    """Map integer squared distances to left-closed uniform bin indices."""
    lam_scaled = np.sqrt(d2.astype(np.float64)) * scale
    idx = lam_scaled.astype(np.int64)
    np.minimum(idx, bins - 1, out=idx)  # lambda = 2 closes the last bin
    return np.bincount(idx, minlength=bins)


def _row_ranges(n_rows: int) -> list[tuple[int, int]]:
    return [(i, min(i + _CHUNK_ROWS, n_rows)) for i in range(0, n_rows, _CHUNK_ROWS)]


def _map_chunks(fn, ranges, workers: int):
    nworkers = resolve_workers(workers)
    if nworkers <= 1 or len(ranges) <= 1:
        return [fn(r) for r in ranges]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=nworkers) as pool:
        return list(pool.map(fn, ranges))


def _load_points_for_pairs(ps: LatticePointSet, max_points: int) -> np.ndarray:
    try:
        return pointsets.points_array(ps, max_points=max_points)
    except BudgetExceededError as exc:
        raise BudgetExceededError(
            f"{exc} — all-pairs work is quadratic; use sampled mode or raise the cap"
        ) from None


def exact_histogram(
    ps: LatticePointSet,
    bins: int = DEFAULT_BINS,
    *,
    max_points: int = DEFAULT_EXACT_CAP,
    workers: int = 0,
) -> PairHistogram:
    """Histogram of all N(N-1)/2 unordered distinct pairs of the set."""
    edges = _uniform_edges(bins)
    pts = _load_points_for_pairs(ps, max_points)
    n_points = pts.shape[0]
    scale = bins / (2.0 * ps.radius)

    def chunk_counts(rng: tuple[int, int]) -> np.ndarray:
        i0, i1 = rng
        acc = np.zeros(bins, dtype=np.int64)
        for i in range(i0, i1):
            diff = pts[i + 1 :] - pts[i]
            d2 = np.einsum("ij,ij->i", diff, diff)
            acc += _bin_squared_distances(d2, scale, bins)
        return acc

    partials = _map_chunks(chunk_counts, _row_ranges(n_points - 1), workers) if n_points > 1 else []
    counts = np.zeros(bins, dtype=np.int64)
    for p in partials:
        counts += p
    return PairHistogram(
        n=ps.n,
        radius=ps.radius,
        bin_edges=edges,
        counts=counts,
        total_pairs=n_points * (n_points - 1) // 2,
        mode=MODE_EXACT,
    )


def sampled_histogram(
    ps: LatticePointSet,
    bins: int,
    samples: int,
    seed: int,
    *,
    max_points: int = pointsets.DEFAULT_ENUM_BUDGET,
    workers: int = 0,
) -> PairHistogram:
    """Histogram of `samples` ordered pairs drawn with replacement (x != y,
    the diagonal is rejected and redrawn); deterministic given the seed."""
    edges = _uniform_edges(bins)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
        raise DomainError(f"samples must be an integer >= 1, got {samples!r}")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise DomainError(f"seed must be an integer, got {seed!r}")
    pts = pointsets.points_array(ps, max_points=max_points)
    n_points = pts.shape[0]
    if n_points < 2:
        raise DomainError(f"sampling needs at least 2 points, set has {n_points}")
    scale = bins / (2.0 * ps.radius)

    def block_counts(index: int, m: int) -> np.ndarray:
        rng = block_stream(seed, index)
        pairs = rng.integers(0, n_points, size=(m, 2), dtype=np.int64)
        bad = pairs[:, 0] == pairs[:, 1]
        while bad.any():
            pairs[bad] = rng.integers(0, n_points, size=(int(bad.sum()), 2), dtype=np.int64)
            bad = pairs[:, 0] == pairs[:, 1]
        diff = pts[pairs[:, 0]] - pts[pairs[:, 1]]
        d2 = np.einsum("ij,ij->i", diff, diff)
        return _bin_squared_distances(d2, scale, bins)

    counts = np.zeros(bins, dtype=np.int64)
    for partial in sample_blocks(block_counts, samples, workers=workers):
        counts += partial
    return PairHistogram(
        n=ps.n,
        radius=ps.radius,
        bin_edges=edges,
        counts=counts,
        total_pairs=samples,
        mode=MODE_SAMPLED,
        seed=seed,
    )


def ks_compare(
    hist: PairHistogram,
    spec: theory.DistributionSpec,
    *,
    threshold: float = 0.01,
) -> GofReport:
    """Sup over bin edges of |empirical CDF - theory CDF|.

    A conservative discretized statistic (no p-values): the default 0.01
    threshold is calibrated for >= 1e6 pairs; pass a larger one for small
    samples.
    """
    if hist.n != spec.n:
        raise DomainError(f"histogram n={hist.n} does not match spec n={spec.n}")
    if hist.total_pairs <= 0:
        raise DomainError("cannot compare an empty histogram")
    ecdf = hist.empirical_cdf
    tcdf = np.array([theory.cdf(spec, float(e)) for e in hist.bin_edges])
    statistic = float(np.max(np.abs(ecdf - tcdf)))
    return GofReport(
        statistic_kind="ks",
        statistic=statistic,
        sample_size=hist.total_pairs,
        threshold=threshold,
        passed=statistic <= threshold,
    )


def pair_count_in_region(
    ps: LatticePointSet,
    lam: theory.Lambda | float,
    *,
    max_points: int = DEFAULT_EXACT_CAP,
    workers: int = 0,
) -> int:
    """Ordered pairs (a, b) — diagonal included — with |a - b| <= lam * R.

    Equals N at lam = 0 and N^2 at lam = 2.
    """
    lam = theory.Lambda(lam).value if not isinstance(lam, theory.Lambda) else lam.value
    pts = _load_points_for_pairs(ps, max_points)
    n_points = pts.shape[0]
    threshold = (lam * ps.radius) ** 2

    def chunk_count(rng: tuple[int, int]) -> int:
        i0, i1 = rng
        acc = 0
        for i in range(i0, i1):
            diff = pts[i + 1 :] - pts[i]
            d2 = np.einsum("ij,ij->i", diff, diff)
            acc += int(np.count_nonzero(d2 <= threshold))
        return acc

    if n_points > 1:
        unordered = sum(_map_chunks(chunk_count, _row_ranges(n_points - 1), workers))
    else:
        unordered = 0
    return 2 * unordered + n_points


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_histogram_csv(
    hist: PairHistogram,
    destination: str | IO[str],
    *,
    header_lines: Sequence[str] = (),
) -> None:
    """Write the histogram in the interchange schema, optionally prefixed by
    '#' provenance lines.  theory_pdf_at_midpoint is evaluated on the fly."""
    spec = theory.DistributionSpec(hist.n)
    freqs = hist.relative_frequencies
    mids = hist.midpoints

    def _write(fh: IO[str]) -> None:
        for line in header_lines:
            fh.write(f"# {line}\n" if not line.startswith("#") else f"{line}\n")
        fh.write(",".join(HISTOGRAM_CSV_COLUMNS) + "\n")
        for k in range(hist.counts.size):
            row = (
                _fmt(hist.bin_edges[k]),
                _fmt(hist.bin_edges[k + 1]),
                str(int(hist.counts[k])),
                _fmt(freqs[k]),
                _fmt(theory.pdf(spec, float(mids[k]))),
            )
            fh.write(",".join(row) + "\n")

    if isinstance(destination, str):
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            _write(fh)
    else:
        _write(destination)
