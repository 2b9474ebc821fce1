"""Monte Carlo cross-checks for the analytic volumes and cap measures.

Deliberately independent of the `theory` evaluation path: plain hit-or-miss
over bounding boxes and Gaussian direction sampling, with exact binomial
error bars.  Simple and unbiased — adequate up to the moderate dimensions the
validation suite needs, inefficient beyond (hit rates collapse).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun, theory
from ._rng import block_stream, sample_blocks
from .errors import DomainError
from .specfun import BetaParams
from .theory import Lambda

__all__ = [
    "MIN_SAMPLES",
    "MAX_REGION_DIMENSION",
    "RegionSpec",
    "McEstimate",
    "mc_region_volume",
    "mc_cap_volume",
    "mc_cap_measure",
    "analytic_cap_volume",
    "report",
]

MIN_SAMPLES = 10_000
# Hit-or-miss over [-1,1]^{2n} is hopeless far beyond this (see module note).
MAX_REGION_DIMENSION = 12


@dataclass(frozen=True)
class RegionSpec:
    """The set of pairs (a, b) in R^{2n} with |a| <= 1, |b| <= 1, |a-b| <= lam."""

    n: int
    lam: Lambda

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise DomainError(f"dimension n must be an integer >= 1, got {self.n!r}")
        lam = self.lam if isinstance(self.lam, Lambda) else Lambda(self.lam)
        object.__setattr__(self, "lam", lam)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Vectorized membership for an (m, 2n) array of candidate pairs."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 * self.n:
            raise DomainError(
                f"expected an (m, {2 * self.n}) array, got shape {pts.shape}"
            )
        a = pts[:, : self.n]
        b = pts[:, self.n :]
        lam2 = self.lam.value * self.lam.value
        return (
            (np.einsum("ij,ij->i", a, a) <= 1.0)
            & (np.einsum("ij,ij->i", b, b) <= 1.0)
            & (np.einsum("ij,ij->i", a - b, a - b) <= lam2)
        )


@dataclass(frozen=True)
class McEstimate:
    """Hit-or-miss estimate with its exact binomial standard error."""

    value: float
    std_error: float
    samples: int
    seed: int

    def sigma_distance(self, analytic_value: float) -> float:
        """|value - analytic| in units of std_error (0/0 -> 0, x/0 -> inf)."""
        diff = abs(self.value - float(analytic_value))
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.inf
        return diff / self.std_error


def _validate_sampling(samples: int, seed: int) -> None:
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < MIN_SAMPLES:
        raise DomainError(f"samples must be an integer >= {MIN_SAMPLES}, got {samples!r}")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise DomainError(f"seed must be an integer, got {seed!r}")


def _binomial_estimate(
    hits: int, samples: int, seed: int, reference_volume: float
) -> McEstimate:
    p = hits / samples
    return McEstimate(
        value=p * reference_volume,
        std_error=math.sqrt(p * (1.0 - p) / samples) * reference_volume,
        samples=samples,
        seed=seed,
    )


def mc_region_volume(
    region: RegionSpec, samples: int, seed: int, *, workers: int = 0
) -> McEstimate:
    """Hit-or-miss volume of the pair region over the box [-1,1]^{2n}."""
    _validate_sampling(samples, seed)
    dim = 2 * region.n
    if dim > MAX_REGION_DIMENSION:
        raise DomainError(
            f"hit-or-miss region sampling is limited to 2n <= {MAX_REGION_DIMENSION}, "
            f"got 2n={dim}"
        )

    def block_hits(index: int, m: int) -> int:
        rng = block_stream(seed, index)
        pts = rng.random((m, dim), dtype=np.float64)
        pts = 2.0 * pts - 1.0
        return int(np.count_nonzero(region.contains(pts)))

    hits = sum(sample_blocks(block_hits, samples, workers=workers))
    return _binomial_estimate(hits, samples, seed, 2.0**dim)


def analytic_cap_volume(n: int, separation: float) -> float:
    """Volume of the cap {x in B_n(1) : x_1 >= separation/2} via the
    regularized incomplete Beta (the formula under test)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"dimension n must be an integer >= 1, got {n!r}")
    sep = Lambda(separation).value
    x = 1.0 - 0.25 * sep * sep
    half_ball = 0.5 * theory.unit_ball_volume(n)
    return half_ball * specfun.reg_inc_beta(x, BetaParams(0.5 * (n + 1), 0.5))


def mc_cap_volume(
    n: int, separation: float, samples: int, seed: int, *, workers: int = 0
) -> McEstimate:
    """Hit-or-miss volume of the cap {x in B_n(1) : x_1 >= separation/2},
    the half-lens at distance `separation` between two unit-ball centers."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"dimension n must be an integer >= 1, got {n!r}")
    if n > MAX_REGION_DIMENSION:
        raise DomainError(
            f"hit-or-miss cap sampling is limited to n <= {MAX_REGION_DIMENSION}, got {n}"
        )
    sep = Lambda(separation).value
    _validate_sampling(samples, seed)
    base = 0.5 * sep

    def block_hits(index: int, m: int) -> int:
        rng = block_stream(seed, index)
        pts = 2.0 * rng.random((m, n), dtype=np.float64) - 1.0
        inside = np.einsum("ij,ij->i", pts, pts) <= 1.0
        return int(np.count_nonzero(inside & (pts[:, 0] >= base)))

    hits = sum(sample_blocks(block_hits, samples, workers=workers))
    return _binomial_estimate(hits, samples, seed, 2.0**n)


def mc_cap_measure(
    n: int, half_angle: float, samples: int, seed: int, *, workers: int = 0
) -> McEstimate:
    """Fraction of uniform directions on S^{n-1} within half_angle of the
    pole (Gaussian sampling + normalization); reference volume 1."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"dimension n must be an integer >= 1, got {n!r}")
    if isinstance(half_angle, bool) or not isinstance(half_angle, (int, float)):
        raise DomainError(f"half_angle must be a real number, got {half_angle!r}")
    theta = float(half_angle)
    if not math.isfinite(theta) or theta <= 0.0 or theta > math.pi:
        raise DomainError(f"half_angle must lie in (0, pi], got {theta}")
    _validate_sampling(samples, seed)
    cos_cap = math.cos(theta)

    def block_hits(index: int, m: int) -> int:
        rng = block_stream(seed, index)
        g = rng.standard_normal((m, n))
        norms = np.sqrt(np.einsum("ij,ij->i", g, g))
        # A Gaussian draw at exactly the origin has probability 0; guard anyway.
        norms[norms == 0.0] = 1.0
        cosines = g[:, 0] / norms
        return int(np.count_nonzero(cosines >= cos_cap))

    hits = sum(sample_blocks(block_hits, samples, workers=workers))
    return _binomial_estimate(hits, samples, seed, 1.0)


def report(estimate: McEstimate, analytic_value: float | None = None) -> dict:
    """JSON-ready summary of an estimate, optionally against an analytic value."""
    out = {
        "value": estimate.value,
        "std_error": estimate.std_error,
        "samples": estimate.samples,
        "seed": estimate.seed,
        "analytic_value": analytic_value,
        "sigma_distance": (
            None if analytic_value is None else estimate.sigma_distance(analytic_value)
        ),
    }
    return out
