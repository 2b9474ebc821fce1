"""Tests for the empirical pair-distance histograms.

Oracles: tiny point sets whose pair distances are enumerable by hand, a
quadratic double loop over all pairs for small sets, binomial error bars for
sampled-vs-exact agreement, and an inverse-CDF sampler that produces data
distributed exactly by the theoretical law for the goodness-of-fit check.
"""

import csv
import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from paircorr import BudgetExceededError, DomainError
from paircorr.empirical import (
    DEFAULT_EXACT_CAP,
    HISTOGRAM_CSV_COLUMNS,
    MODE_EXACT,
    MODE_SAMPLED,
    GofReport,
    PairHistogram,
    exact_histogram,
    ks_compare,
    pair_count_in_region,
    sampled_histogram,
    write_histogram_csv,
)
from paircorr.pointsets import KIND_PRIMITIVE, LatticePointSet, points_array
from paircorr.theory import DistributionSpec, cdf, pdf


def _brute_force_hist(ps, bins):
    """Quadratic double loop over all unordered pairs; fully independent."""
    pts = points_array(ps).astype(float)
    n = pts.shape[0]
    edges = np.linspace(0.0, 2.0, bins + 1)
    counts = np.zeros(bins, dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        lam = np.linalg.norm(pts[i] - pts[j]) / ps.radius
        idx = min(int(lam * bins / 2.0), bins - 1)
        counts[idx] += 1
    return counts


# ---------------------------------------------------------------------------
# exact mode
# ---------------------------------------------------------------------------


def test_exact_tiny_line_set():
    # Points {-1, 0, 1}: normalized distances {1, 1, 2} with two bins.
    hist = exact_histogram(LatticePointSet(1, 1.5), bins=2)
    assert hist.counts.tolist() == [2, 1]
    assert hist.total_pairs == 3
    assert hist.mode == MODE_EXACT
    assert hist.seed is None


def test_exact_bin_edges_are_left_closed():
    # Points {-1, 0, 1} with R = 1: distances 1, 1, 2 -> lam values 1, 1, 2.
    # lam = 1.0 sits exactly on the interior edge and must land on the right
    # bin; lam = 2.0 belongs to the final (closed) bin.
    hist = exact_histogram(LatticePointSet(1, 1.0), bins=2)
    assert hist.counts.tolist() == [0, 3]


def test_exact_single_point_set_has_no_pairs():
    ps = LatticePointSet(2, 0.5)  # only the origin
    hist = exact_histogram(ps, bins=4)
    assert hist.total_pairs == 0
    assert hist.counts.tolist() == [0, 0, 0, 0]
    assert np.all(hist.relative_frequencies == 0.0)


@pytest.mark.parametrize("radius,bins", [(2.0, 8), (3.0, 5), (4.5, 16)])
def test_exact_matches_brute_force(radius, bins):
    ps = LatticePointSet(2, radius)
    hist = exact_histogram(ps, bins=bins)
    expected = _brute_force_hist(ps, bins)
    assert np.array_equal(hist.counts, expected)
    n = points_array(ps).shape[0]
    assert hist.total_pairs == n * (n - 1) // 2


def test_exact_mass_conservation():
    ps = LatticePointSet(3, 3.0)
    hist = exact_histogram(ps, bins=13)
    n = points_array(ps).shape[0]
    assert int(hist.counts.sum()) == hist.total_pairs == n * (n - 1) // 2
    assert_allclose(hist.relative_frequencies.sum(), 1.0, rtol=1e-14)


def test_exact_worker_independence():
    ps = LatticePointSet(2, 25.0)
    h1 = exact_histogram(ps, bins=64, workers=1)
    h3 = exact_histogram(ps, bins=64, workers=3)
    assert np.array_equal(h1.counts, h3.counts)


def test_exact_budget_error_suggests_sampling():
    ps = LatticePointSet(2, 300.0)  # ~283k points, far over the default cap
    with pytest.raises(BudgetExceededError) as exc_info:
        exact_histogram(ps, bins=10)
    assert "sampled" in str(exc_info.value)
    assert str(DEFAULT_EXACT_CAP) in str(exc_info.value)


# ---------------------------------------------------------------------------
# sampled mode
# ---------------------------------------------------------------------------


def test_sampled_mass_and_metadata():
    ps = LatticePointSet(2, 20.0)
    hist = sampled_histogram(ps, 50, 10_000, 7)
    assert hist.mode == MODE_SAMPLED
    assert hist.seed == 7
    assert hist.total_pairs == 10_000
    assert int(hist.counts.sum()) == 10_000


def test_sampled_same_seed_is_identical():
    ps = LatticePointSet(2, 20.0)
    a = sampled_histogram(ps, 40, 30_000, 123)
    b = sampled_histogram(ps, 40, 30_000, 123)
    assert np.array_equal(a.counts, b.counts)


def test_sampled_different_seeds_differ():
    ps = LatticePointSet(2, 20.0)
    a = sampled_histogram(ps, 40, 30_000, 123)
    b = sampled_histogram(ps, 40, 30_000, 124)
    assert not np.array_equal(a.counts, b.counts)


def test_sampled_worker_independence():
    ps = LatticePointSet(2, 30.0)
    a = sampled_histogram(ps, 50, 2_200_000, 99, workers=1)
    b = sampled_histogram(ps, 50, 2_200_000, 99, workers=3)
    assert np.array_equal(a.counts, b.counts)


def test_sampled_agrees_with_exact():
    ps = LatticePointSet(2, 40.0)
    bins = 50
    samples = 1_000_000
    exact = exact_histogram(ps, bins=bins)
    sampled = sampled_histogram(ps, bins, samples, 31)
    p_exact = exact.relative_frequencies
    p_sampled = sampled.relative_frequencies
    diff = np.abs(p_sampled - p_exact)
    assert diff.max() <= 5e-3
    # binomial standard errors: nearly all bins within 3 sigma, all within 4
    sigma = np.sqrt(np.maximum(p_exact * (1.0 - p_exact), 1e-12) / samples)
    assert np.mean(diff <= 3.0 * sigma) >= 0.97
    assert np.all(diff <= 4.0 * sigma)


# ---------------------------------------------------------------------------
# PairHistogram validation
# ---------------------------------------------------------------------------


def _edges(bins):
    return np.linspace(0.0, 2.0, bins + 1)


def test_histogram_validation_errors():
    good = dict(
        n=2,
        radius=5.0,
        bin_edges=_edges(4),
        counts=np.array([1, 2, 3, 4], dtype=np.int64),
        total_pairs=10,
        mode=MODE_EXACT,
    )
    PairHistogram(**good)
    with pytest.raises(DomainError):
        PairHistogram(**{**good, "total_pairs": 9})  # counts do not sum
    with pytest.raises(DomainError):
        PairHistogram(**{**good, "counts": np.array([1, 2, 3, -6])})
    with pytest.raises(DomainError):
        PairHistogram(**{**good, "bin_edges": _edges(4)[::-1]})
    with pytest.raises(DomainError):
        PairHistogram(**{**good, "bin_edges": _edges(4) + 0.5})
    with pytest.raises(DomainError):
        PairHistogram(**{**good, "mode": "approximate"})
    with pytest.raises(DomainError):
        PairHistogram(**{**good, "mode": MODE_SAMPLED})  # sampled needs a seed
    with pytest.raises(DomainError):
        PairHistogram(**{**good, "seed": 3})  # exact forbids a seed


def test_histogram_derived_quantities():
    hist = exact_histogram(LatticePointSet(2, 6.0), bins=10)
    assert_allclose(hist.bin_widths, np.full(10, 0.2), rtol=1e-15)
    assert_allclose(hist.midpoints, np.linspace(0.1, 1.9, 10), rtol=1e-14)
    ecdf = hist.empirical_cdf
    assert ecdf[0] == 0.0
    assert_allclose(ecdf[-1], 1.0, rtol=1e-14)
    assert np.all(np.diff(ecdf) >= 0.0)


# ---------------------------------------------------------------------------
# goodness of fit
# ---------------------------------------------------------------------------


def test_ks_statistic_small_for_inverse_cdf_samples():
    # Draw lam values distributed exactly by the n=3 law via CDF inversion,
    # then check the KS distance of their histogram against that law.
    n = 3
    spec = DistributionSpec(n)
    grid = np.linspace(0.0, 2.0, 4001)
    cdf_grid = np.array([cdf(spec, float(l)) for l in grid])
    rng = np.random.default_rng(2718)
    lams = np.interp(rng.uniform(0.0, 1.0, 1_000_000), cdf_grid, grid)
    bins = 200
    counts, edges = np.histogram(lams, bins=bins, range=(0.0, 2.0))
    hist = PairHistogram(
        n=n,
        radius=1.0,
        bin_edges=edges,
        counts=counts.astype(np.int64),
        total_pairs=int(counts.sum()),
        mode=MODE_SAMPLED,
        seed=2718,
    )
    report = ks_compare(hist, spec)
    assert report.statistic_kind == "ks"
    assert report.statistic < 0.005
    assert report.passed
    assert report.sample_size == 1_000_000


def test_ks_detects_wrong_model():
    # Distances from a 2-d lattice relabeled as 5-dimensional data must fail
    # badly against the n = 5 law.
    ps = LatticePointSet(2, 40.0)
    base = exact_histogram(ps, bins=100)
    mislabeled = PairHistogram(
        n=5,
        radius=base.radius,
        bin_edges=base.bin_edges,
        counts=base.counts,
        total_pairs=base.total_pairs,
        mode=base.mode,
    )
    report = ks_compare(mislabeled, DistributionSpec(5))
    assert not report.passed
    assert report.statistic > 0.1


def test_ks_rejects_dimension_mismatch():
    hist = exact_histogram(LatticePointSet(2, 10.0), bins=20)
    with pytest.raises(DomainError):
        ks_compare(hist, DistributionSpec(3))


def test_ks_threshold_is_configurable():
    ps = LatticePointSet(2, 15.0)
    hist = exact_histogram(ps, bins=50)
    loose = ks_compare(hist, DistributionSpec(2), threshold=0.5)
    tight = ks_compare(hist, DistributionSpec(2), threshold=1e-6)
    assert loose.passed and not tight.passed
    assert loose.statistic == tight.statistic
    assert loose.threshold == 0.5


def test_ks_empty_histogram_rejected():
    hist = exact_histogram(LatticePointSet(2, 0.5), bins=4)  # zero pairs
    with pytest.raises(DomainError):
        ks_compare(hist, DistributionSpec(2))


def test_gof_report_consistency_enforced():
    with pytest.raises(DomainError):
        GofReport(
            statistic_kind="ks",
            statistic=0.5,
            sample_size=100,
            threshold=0.01,
            passed=True,  # inconsistent with statistic > threshold
        )
    report = GofReport(
        statistic_kind="ks", statistic=0.005, sample_size=100, threshold=0.01, passed=True
    )
    payload = report.to_json_dict()
    assert set(payload) == {"kind", "statistic", "sample_size", "threshold", "pass"}
    assert payload["pass"] is True


# ---------------------------------------------------------------------------
# pair_count_in_region
# ---------------------------------------------------------------------------


def test_pair_count_identities():
    ps = LatticePointSet(2, 5.0)
    n = points_array(ps).shape[0]
    # lam = 2 captures every ordered pair including the diagonal
    assert pair_count_in_region(ps, 2.0) == n * n
    # lam = 0 captures exactly the diagonal
    assert pair_count_in_region(ps, 0.0) == n


def test_pair_count_brute_force():
    ps = LatticePointSet(2, 4.0)
    pts = points_array(ps).astype(float)
    lam = 0.75
    expected = 0
    for a in pts:
        for b in pts:
            if np.linalg.norm(a - b) <= lam * ps.radius:
                expected += 1
    assert pair_count_in_region(ps, lam) == expected


def test_pair_count_tracks_cdf():
    ps = LatticePointSet(2, 30.0)
    n = points_array(ps).shape[0]
    spec = DistributionSpec(2)
    for lam in (0.5, 1.0, 1.5):
        ratio = pair_count_in_region(ps, lam) / (n * n)
        assert abs(ratio - cdf(spec, lam)) <= 0.02


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------


def test_csv_round_trip(tmp_path):
    ps = LatticePointSet(2, 10.0)
    hist = exact_histogram(ps, bins=20)
    path = str(tmp_path / "pairs.csv")
    write_histogram_csv(hist, path, header_lines=("run: unit-test",))
    with open(path, newline="") as fh:
        comments = []
        rows = list(csv.reader(line for line in fh if not line.startswith("#") or comments.append(line)))
    header, data = rows[0], rows[1:]
    assert tuple(header) == HISTOGRAM_CSV_COLUMNS
    assert any("unit-test" in c for c in comments)
    assert len(data) == 20
    spec = DistributionSpec(2)
    for i, row in enumerate(data):
        left, right, count_, freq, pdf_mid = row
        assert float(left) == pytest.approx(hist.bin_edges[i], rel=1e-15)
        assert float(right) == pytest.approx(hist.bin_edges[i + 1], rel=1e-15)
        assert int(count_) == int(hist.counts[i])
        # .17g formatting round-trips doubles exactly
        assert float(freq) == hist.relative_frequencies[i]
        assert float(pdf_mid) == pdf(spec, float(hist.midpoints[i]))


def test_csv_writer_accepts_stream():
    import io

    hist = exact_histogram(LatticePointSet(1, 1.5), bins=2)
    buf = io.StringIO()
    write_histogram_csv(hist, buf, header_lines=("origin: stream-test",))
    text = buf.getvalue()
    # caller-supplied header lines are emitted as '#' comments before the table
    assert text.startswith("# origin: stream-test\n")
    lines = text.splitlines()
    assert lines[1].split(",")[0] == "bin_left"
    assert len(lines) == 4  # comment + header + two bins
