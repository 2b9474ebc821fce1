"""Acceptance gate: one test per release criterion.

Each test prints a single PASS line on success (visible with -s / in failure
reports) and enforces both the numerical tolerance and the runtime budget of
its criterion.  Criteria are numbered c01..c10; the -v output doubles as the
pass/fail checklist.
"""

import json
import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
from scipy import integrate

from paircorr.empirical import (
    exact_histogram,
    ks_compare,
    pair_count_in_region,
    sampled_histogram,
)
from paircorr.oracle import RegionSpec, mc_region_volume
from paircorr.pointsets import (
    KIND_INTEGER,
    KIND_PRIMITIVE,
    LatticePointSet,
    WedgeSpec,
    count,
    radial_check,
    wedge_check,
)
from paircorr.specfun import log_beta, reg_inc_beta
from paircorr.theory import (
    DistributionSpec,
    EvalMode,
    cdf,
    mode,
    pdf,
    pdf_closed_form,
    pdf_polynomial_odd,
    region_volume,
    unit_ball_volume,
)


def _elapsed_under(t0, limit, label):
    elapsed = time.perf_counter() - t0
    assert elapsed < limit, f"{label}: {elapsed:.1f}s exceeds the {limit}s budget"
    return elapsed


def test_c01_special_function_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1001)

    # reflection: I_x(a,b) + I_{1-x}(b,a) = 1, within 1e-12 over 1e4 draws
    for _ in range(10_000):
        a = float(rng.uniform(0.05, 60.0))
        b = float(rng.uniform(0.05, 60.0))
        x = float(rng.uniform(0.0, 1.0))
        total = reg_inc_beta(x, (a, b)) + reg_inc_beta(1.0 - x, (b, a))
        assert abs(total - 1.0) <= 1e-12

    # duplication: 2^(2a-1) B(a,a) = B(a,1/2), within 1e-11 over 1e4 draws
    for _ in range(10_000):
        a = float(rng.uniform(0.5, 100.0))
        lhs = (2.0 * a - 1.0) * math.log(2.0) + log_beta(a, a)
        rhs = log_beta(a, 0.5)
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))

    # adaptive quadrature of the beta integrand on a 10x10x10 grid, 1e-9.
    # The integrand is pre-scaled by 1/B(a,b) (high-precision constant from
    # mpmath) so quadrature works on O(1) values; a full-interval self-check
    # validates the oracle before it is used.
    import warnings

    import mpmath

    mpmath.mp.dps = 40
    xs = np.linspace(0.05, 0.95, 10)
    params = np.geomspace(0.2, 50.0, 10)
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a in params:
            for b in params:
                scale = float(1.0 / mpmath.beta(float(a), float(b)))
                full, _ = integrate.quad(
                    lambda t: scale, 0.0, 1.0, weight="alg",
                    wvar=(a - 1.0, b - 1.0), epsabs=1e-12, epsrel=1e-12, limit=400,
                )
                assert abs(full - 1.0) <= 1e-10  # oracle sanity
                for x in xs:
                    ref, _ = integrate.quad(
                        lambda t: scale * (1.0 - t) ** (b - 1.0),
                        0.0,
                        float(x),
                        weight="alg",
                        wvar=(a - 1.0, 0.0),
                        epsabs=1e-12,
                        epsrel=1e-12,
                        limit=400,
                    )
                    got = reg_inc_beta(float(x), (float(a), float(b)))
                    worst = max(worst, abs(got - ref))
    assert worst <= 1e-9, f"quadrature disagreement {worst}"

    elapsed = _elapsed_under(t0, 10.0, "special-function identities")
    print(f"ACCEPTANCE c01 special-function identities: PASS ({elapsed:.1f}s, quad worst {worst:.2e})")


def test_c02_closed_forms():
    t0 = time.perf_counter()
    grid = np.linspace(0.0, 2.0, 1000)
    s2, s3 = DistributionSpec(2), DistributionSpec(3)
    for lam in grid:
        lam = float(lam)
        assert abs(pdf(s2, lam) - pdf_closed_form(2, lam)) <= 1e-12
        assert abs(pdf(s3, lam) - pdf_closed_form(3, lam)) <= 1e-12
    poly = pdf_polynomial_odd(3)
    assert poly.evaluate_exact(Fraction(1)) == Fraction(15, 16)
    assert poly(1.0) == 0.9375  # dyadic coefficients evaluate exactly in floats
    elapsed = _elapsed_under(t0, 1.0, "closed forms")
    print(f"ACCEPTANCE c02 closed forms: PASS ({elapsed:.2f}s)")


def test_c03_normalization():
    t0 = time.perf_counter()
    for n in range(1, 21):
        spec = DistributionSpec(n)
        total, _ = integrate.quad(lambda l: pdf(spec, l), 0.0, 2.0, limit=200)
        assert abs(total - 1.0) <= 1e-9, f"n={n}: integral {total}"
        assert abs(cdf(spec, 2.0) - 1.0) <= 1e-12
    for n in range(1, 11):
        got = region_volume(DistributionSpec(n), 2.0)
        want = unit_ball_volume(n) ** 2
        assert abs(got - want) <= 1e-10 * want
    elapsed = _elapsed_under(t0, 10.0, "normalization")
    print(f"ACCEPTANCE c03 normalization: PASS ({elapsed:.1f}s)")


def test_c04_odd_polynomials():
    t0 = time.perf_counter()
    grid = np.linspace(0.0, 2.0, 501)
    for n in (1, 3, 5, 7, 9):
        poly = pdf_polynomial_odd(n)
        assert poly.definite_integral() == Fraction(1)  # exact rational arithmetic
        spec = DistributionSpec(n)
        worst = max(abs(poly(float(l)) - pdf(spec, float(l))) for l in grid)
        assert worst <= 1e-10, f"n={n}: worst {worst}"
    elapsed = _elapsed_under(t0, 5.0, "odd polynomials")
    print(f"ACCEPTANCE c04 odd-n polynomials: PASS ({elapsed:.1f}s)")


def test_c05_monte_carlo_volume():
    t0 = time.perf_counter()
    cells = [(n, lam) for n in (1, 2, 3) for lam in (0.5, 1.0, 1.5, 2.0)]
    hits = 0
    worst_sigma = 0.0
    for i, (n, lam) in enumerate(cells):
        est = mc_region_volume(RegionSpec(n, lam), 10_000_000, 4200 + i)
        analytic = region_volume(DistributionSpec(n), lam)
        sigma = est.sigma_distance(analytic)
        worst_sigma = max(worst_sigma, 0.0 if math.isinf(sigma) else sigma)
        if sigma <= 3.0:
            hits += 1
    assert hits >= 11, f"only {hits}/12 cells within 3 sigma"
    elapsed = _elapsed_under(t0, 120.0, "Monte Carlo volume")
    print(
        f"ACCEPTANCE c05 Monte Carlo volume oracle: PASS "
        f"({hits}/12 cells, worst finite sigma {worst_sigma:.2f}, {elapsed:.1f}s)"
    )


def test_c06_volume_heuristic_on_lattices():
    t0 = time.perf_counter()
    worst = 0.0
    for n, radius in ((2, 50.0), (3, 20.0)):
        ps = LatticePointSet(n, radius)
        n_points = count(ps)
        spec = DistributionSpec(n)
        for lam in (0.5, 1.0, 1.5):
            ratio = pair_count_in_region(ps, lam, max_points=40_000) / n_points**2
            diff = abs(ratio - cdf(spec, lam))
            worst = max(worst, diff)
            assert diff <= 0.02, f"n={n} R={radius} lam={lam}: diff {diff}"
    elapsed = _elapsed_under(t0, 120.0, "volume heuristic")
    print(f"ACCEPTANCE c06 volume heuristic: PASS (worst diff {worst:.4f}, {elapsed:.1f}s)")


def test_c07_figure_scale_reproduction():
    t0 = time.perf_counter()
    runs = [
        (2, 300.0, KIND_INTEGER, 71),
        (2, 300.0, KIND_PRIMITIVE, 72),
        (3, 30.0, KIND_INTEGER, 73),
        (3, 30.0, KIND_PRIMITIVE, 74),
    ]
    stats = []
    for n, radius, kind, seed in runs:
        ps = LatticePointSet(n, radius, kind=kind)
        hist = sampled_histogram(ps, 200, 10_000_000, seed, workers=4)
        rep = ks_compare(hist, DistributionSpec(n))
        stats.append(rep.statistic)
        assert rep.statistic < 0.01, f"{n=} {radius=} {kind}: KS {rep.statistic}"
        assert rep.passed
    elapsed = _elapsed_under(t0, 600.0, "figure-scale runs")
    pretty = ", ".join(f"{s:.5f}" for s in stats)
    print(f"ACCEPTANCE c07 figure-scale reproduction: PASS (KS {pretty}, {elapsed:.1f}s)")


def test_c08_equidistribution_checks():
    t0 = time.perf_counter()
    radial = radial_check(KIND_INTEGER, 2, 100.0, 2.0)
    assert abs(radial - 1.0) <= 0.01

    for kind in (KIND_INTEGER, KIND_PRIMITIVE):
        ps = LatticePointSet(2, 300.0, kind=kind)
        for half_angle in (math.pi / 6.0, math.pi / 3.0, math.pi / 2.0):
            ratio = wedge_check(ps, WedgeSpec((1.0, 0.0), half_angle, 300.0))
            assert abs(ratio - 1.0) <= 0.02, f"{kind} cap {half_angle}: {ratio}"

    prim = count(LatticePointSet(2, 200.0, kind=KIND_PRIMITIVE))
    integ = count(LatticePointSet(2, 200.0))
    density = prim / integ
    assert abs(density - 6.0 / math.pi**2) <= 0.01
    elapsed = _elapsed_under(t0, 120.0, "equidistribution checks")
    print(
        f"ACCEPTANCE c08 equidistribution: PASS "
        f"(radial {radial:.5f}, primitive density {density:.5f}, {elapsed:.1f}s)"
    )


def test_c09_mode_concentration():
    t0 = time.perf_counter()
    root2 = math.sqrt(2.0)
    assert DistributionSpec(1000).eval_mode is EvalMode.LOG_DOMAIN
    gaps = {n: abs(float(mode(DistributionSpec(n))) - root2) for n in (10, 50, 100, 500, 1000)}
    assert gaps[100] < 0.05
    assert gaps[1000] < 0.005
    ordered = [gaps[n] for n in (10, 50, 100, 500, 1000)]
    assert all(b < a for a, b in zip(ordered, ordered[1:])), f"not monotone: {gaps}"
    elapsed = _elapsed_under(t0, 60.0, "mode concentration")
    print(
        f"ACCEPTANCE c09 mode concentration: PASS "
        f"(|mode-sqrt2| at n=1000: {gaps[1000]:.2e}, {elapsed:.1f}s)"
    )


def test_c10_byte_determinism(tmp_path):
    base = [sys.executable, "-m", "paircorr"]

    def run(args, out):
        proc = subprocess.run(
            base + args + ["--out", out],
            capture_output=True,
            text=True,
            env=os.environ.copy(),
        )
        assert proc.returncode == 0, proc.stderr
        return proc.stdout, open(out, "rb").read()

    pair_args = [
        "pairs", "--n", "2", "--R", "40", "--mode", "sampled",
        "--samples", "1000000", "--seed", "77",
    ]
    results = [
        run(pair_args + ["--workers", w], str(tmp_path / f"pairs_{tag}.csv"))
        for tag, w in (("w1", "1"), ("w4", "4"), ("again", "1"))
    ]
    assert results[0] == results[1] == results[2]

    mc_args = [
        "mc", "--what", "region", "--n", "2", "--lambda", "1.0",
        "--samples", "400000", "--seed", "88",
    ]
    mc_results = [
        run(mc_args + ["--workers", w], str(tmp_path / f"mc_{tag}.json"))
        for tag, w in (("w1", "1"), ("w5", "5"), ("again", "1"))
    ]
    assert mc_results[0] == mc_results[1] == mc_results[2]

    gof = json.loads(results[0][0])
    assert gof["pass"] is True
    print("ACCEPTANCE c10 byte determinism: PASS (pairs x3, mc x3 identical)")
