"""Integer and primitive lattice points inside n-balls, with the radial and
angular equidistribution checks those sets are expected to satisfy.

Enumeration is exact integer arithmetic: coordinate bounds come from integer
square roots, and membership tests compare integer squared norms against the
squared radius, so open/closed boundary behaviour is bit-reproducible.
Points stream in lexicographic order, blocked by leading coordinate, which
keeps memory proportional to a slice rather than the whole ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

import numpy as np

from . import theory
from .errors import BudgetExceededError, DomainError
from .specfun import BetaParams, reg_inc_beta

__all__ = [
    "KIND_INTEGER",
    "KIND_PRIMITIVE",
    "BOUNDARY_OPEN",
    "BOUNDARY_CLOSED",
    "DEFAULT_ENUM_BUDGET",
    "LatticePointSet",
    "WedgeSpec",
    "iter_point_blocks",
    "iter_points",
    "points_array",
    "count",
    "radial_check",
    "cap_measure",
    "wedge_check",
    "write_points",
    "load_points",
]

KIND_INTEGER = "integer"
KIND_PRIMITIVE = "primitive"
BOUNDARY_OPEN = "open"
BOUNDARY_CLOSED = "closed"

# Ceiling on materialized/streamed points per call; a memory/runtime guard,
# not the (much smaller) all-pairs cap that lives in `empirical`.
DEFAULT_ENUM_BUDGET = 50_000_000


@dataclass(frozen=True)
class LatticePointSet:
    """Lattice points of Z^n with norm < R (open) or <= R (closed);
    kind="primitive" keeps only points with coordinate gcd 1."""

    n: int
    radius: float
    kind: str = KIND_INTEGER
    boundary: str = BOUNDARY_CLOSED

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise DomainError(f"dimension n must be an integer >= 1, got {self.n!r}")
        r = self.radius
        if isinstance(r, bool) or not isinstance(r, (int, float)):
            raise DomainError(f"radius must be a real number, got {r!r}")
        r = float(r)
        if not math.isfinite(r) or r <= 0.0:
            raise DomainError(f"radius must be finite and positive, got {r}")
        object.__setattr__(self, "radius", r)
        if self.kind not in (KIND_INTEGER, KIND_PRIMITIVE):
            raise DomainError(
                f"kind must be '{KIND_INTEGER}' or '{KIND_PRIMITIVE}', got {self.kind!r}"
            )
        if self.boundary not in (BOUNDARY_OPEN, BOUNDARY_CLOSED):
            raise DomainError(
                f"boundary must be '{BOUNDARY_OPEN}' or '{BOUNDARY_CLOSED}', got {self.boundary!r}"
            )


@dataclass(frozen=True)
class WedgeSpec:
    """Spherical-cap wedge W(X, r): points of norm < radius whose direction
    lies within half_angle of `axis`."""

    axis: tuple[float, ...]
    half_angle: float
    radius: float

    def __post_init__(self) -> None:
        try:
            axis = tuple(float(c) for c in self.axis)
        except (TypeError, ValueError):
            raise DomainError(f"axis must be a sequence of reals, got {self.axis!r}") from None
        if not axis or not all(math.isfinite(c) for c in axis):
            raise DomainError(f"axis must be a nonempty finite vector, got {self.axis!r}")
        norm = math.sqrt(math.fsum(c * c for c in axis))
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"axis must be a unit vector (|axis|={norm!r})")
        object.__setattr__(self, "axis", axis)
        ha = self.half_angle
        if isinstance(ha, bool) or not isinstance(ha, (int, float)):
            raise DomainError(f"half_angle must be a real number, got {ha!r}")
        ha = float(ha)
        if not math.isfinite(ha) or ha <= 0.0 or ha > math.pi:
            raise DomainError(f"half_angle must lie in (0, pi], got {ha}")
        object.__setattr__(self, "half_angle", ha)
        r = self.radius
        if isinstance(r, bool) or not isinstance(r, (int, float)):
            raise DomainError(f"radius must be a real number, got {r!r}")
        r = float(r)
        if not math.isfinite(r) or r <= 0.0:
            raise DomainError(f"radius must be finite and positive, got {r}")
        object.__setattr__(self, "radius", r)

    @property
    def n(self) -> int:
        return len(self.axis)


def _coord_bound(limit2: float, closed: bool) -> int:
    """Largest b >= 0 with b*b <= limit2 (closed) or b*b < limit2 (open);
    -1 when no integer qualifies."""
    if closed:
        if limit2 < 0.0:
            return -1
        return math.isqrt(int(math.floor(limit2)))
    if limit2 <= 0.0:
        return -1
    c = int(math.ceil(limit2)) - 1
    if c < 0:
        return -1
    return math.isqrt(c)


def _ball_blocks(n: int, limit2: float, closed: bool) -> Iterator[np.ndarray]:
    """Lexicographically ordered (m, n) int64 blocks covering the ball."""
    b = _coord_bound(limit2, closed)
    if b < 0:
        return
    if n == 1:
        yield np.arange(-b, b + 1, dtype=np.int64).reshape(-1, 1)
        return
    for x in range(-b, b + 1):
        rem = limit2 - float(x * x)
        for tail in _ball_blocks(n - 1, rem, closed):
            lead = np.full((tail.shape[0], 1), x, dtype=np.int64)
            yield np.concatenate([lead, tail], axis=1)


def _primitive_mask(block: np.ndarray) -> np.ndarray:
    gcds = np.gcd.reduce(np.abs(block), axis=1)
    return gcds == 1  # the all-zero point has gcd 0, so the origin drops out


def _estimate_count(ps: LatticePointSet) -> float:
    return theory.unit_ball_volume(ps.n) * ps.radius**ps.n + 1.0


def _require_budget(ps: LatticePointSet, max_points: int) -> None:
    if max_points < 1:
        raise DomainError(f"max_points must be >= 1, got {max_points}")
    estimate = _estimate_count(ps)
    if estimate > max_points:
        raise BudgetExceededError(
            f"estimated ~{estimate:.3g} lattice points in the n={ps.n} ball of "
            f"radius {ps.radius} exceeds the budget of {max_points}"
        )


def iter_point_blocks(
    ps: LatticePointSet, *, max_points: int = DEFAULT_ENUM_BUDGET
) -> Iterator[np.ndarray]:
    """Stream the set as (m, n) int64 blocks in lexicographic point order."""
    _require_budget(ps, max_points)
    closed = ps.boundary == BOUNDARY_CLOSED
    limit2 = ps.radius * ps.radius
    for block in _ball_blocks(ps.n, limit2, closed):
        if ps.kind == KIND_PRIMITIVE:
            block = block[_primitive_mask(block)]
        if block.shape[0]:
            yield block


def iter_points(
    ps: LatticePointSet, *, max_points: int = DEFAULT_ENUM_BUDGET
) -> Iterator[tuple[int, ...]]:
    """Stream individual points as tuples, in lexicographic order."""
    for block in iter_point_blocks(ps, max_points=max_points):
        for row in block:
            yield tuple(int(v) for v in row)


def points_array(
    ps: LatticePointSet, *, max_points: int = DEFAULT_ENUM_BUDGET
) -> np.ndarray:
    """Materialize the whole set as an (N, n) int64 array."""
    blocks = []
    total = 0
    for block in iter_point_blocks(ps, max_points=max_points):
        total += block.shape[0]
        if total > max_points:
            raise BudgetExceededError(
                f"enumeration passed {total} points, over the budget of {max_points}"
            )
        blocks.append(block)
    if not blocks:
        return np.empty((0, ps.n), dtype=np.int64)
    return np.concatenate(blocks, axis=0)


def count(ps: LatticePointSet, *, max_points: int = DEFAULT_ENUM_BUDGET) -> int:
    """Number of points in the set, without materializing it."""
    return sum(block.shape[0] for block in iter_point_blocks(ps, max_points=max_points))


def radial_check(
    set_kind: str,
    n: int,
    r: float,
    lam: float,
    *,
    max_points: int = DEFAULT_ENUM_BUDGET,
) -> float:
    """Radial growth ratio N(lam*r) / (N(r) * lam^n), which tends to 1.

    N uses the open-ball convention (points of norm strictly below the
    radius).  `lam` here is a dilation factor, not a pair distance, so any
    positive value is accepted.
    """
    if isinstance(lam, bool) or not isinstance(lam, (int, float)):
        raise DomainError(f"lam must be a real number, got {lam!r}")
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0.0:
        raise DomainError(f"lam must be finite and positive, got {lam}")
    base = LatticePointSet(n, r, kind=set_kind, boundary=BOUNDARY_OPEN)
    dilated = LatticePointSet(n, lam * r, kind=set_kind, boundary=BOUNDARY_OPEN)
    n_base = count(base, max_points=max_points)
    if n_base == 0:
        raise DomainError(f"N(r)=0 at r={r}; radial ratio undefined")
    n_dilated = count(dilated, max_points=max_points)
    return n_dilated / (n_base * lam**n)


def cap_measure(n: int, half_angle: float) -> float:
    """Fraction of the sphere S^{n-1} within `half_angle` of a pole.

    For n >= 2 this is I_{sin^2 theta}((n-1)/2, 1/2) / 2 on [0, pi/2],
    extended by symmetry beyond; S^0 = {-1, +1} is handled discretely.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"dimension n must be an integer >= 1, got {n!r}")
    if isinstance(half_angle, bool) or not isinstance(half_angle, (int, float)):
        raise DomainError(f"half_angle must be a real number, got {half_angle!r}")
    theta = float(half_angle)
    if not math.isfinite(theta) or theta <= 0.0 or theta > math.pi:
        raise DomainError(f"half_angle must lie in (0, pi], got {theta}")
    if n == 1:
        return 1.0 if theta >= math.pi else 0.5
    params = BetaParams(0.5 * (n - 1), 0.5)
    if theta <= 0.5 * math.pi:
        s = math.sin(theta)
        return 0.5 * reg_inc_beta(s * s, params)
    s = math.sin(math.pi - theta)
    return 1.0 - 0.5 * reg_inc_beta(s * s, params)


def wedge_check(
    ps: LatticePointSet,
    wedge: WedgeSpec,
    *,
    max_points: int = DEFAULT_ENUM_BUDGET,
) -> float:
    """Angular equidistribution ratio |T ∩ W(X,r)| / (N(r) * mu(X)) -> 1.

    W uses the open-ball convention.  The full-sphere cap (half_angle = pi)
    is exactly the open ball itself — origin included — so the ratio is
    exactly 1 whenever N(r) > 0.
    """
    if wedge.n != ps.n:
        raise DomainError(
            f"wedge axis has dimension {wedge.n}, point set has n={ps.n}"
        )
    if wedge.radius > ps.radius:
        raise DomainError(
            f"wedge radius {wedge.radius} exceeds the set radius {ps.radius}"
        )
    r2 = wedge.radius * wedge.radius
    full_sphere = wedge.half_angle >= math.pi
    cos_cap = math.cos(wedge.half_angle)
    axis = np.asarray(wedge.axis, dtype=np.float64)
    n_ball = 0
    n_wedge = 0
    for block in iter_point_blocks(ps, max_points=max_points):
        sq = np.einsum("ij,ij->i", block, block)
        in_ball = sq < r2
        n_ball += int(np.count_nonzero(in_ball))
        if full_sphere:
            continue
        dots = block @ axis
        norms = np.sqrt(sq.astype(np.float64))
        in_cap = in_ball & (sq > 0) & (dots >= cos_cap * norms)
        n_wedge += int(np.count_nonzero(in_cap))
    if n_ball == 0:
        raise DomainError(
            f"N(r)=0 at r={wedge.radius}; wedge ratio undefined"
        )
    if full_sphere:
        return 1.0
    mu = cap_measure(ps.n, wedge.half_angle)
    return (n_wedge / n_ball) / mu


def write_points(points: Iterable, destination: str | IO[str]) -> None:
    """Write one point per line, coordinates space-separated."""

    def _write(fh: IO[str]) -> None:
        for row in points:
            fh.write(" ".join(str(int(v)) for v in row))
            fh.write("\n")

    if isinstance(destination, str):
        with open(destination, "w", encoding="utf-8") as fh:
            _write(fh)
    else:
        _write(destination)


def load_points(source: str | IO[str]) -> np.ndarray:
    """Read points written by write_points; '#' lines and blanks are skipped."""

    def _read(fh: IO[str]) -> np.ndarray:
        rows: list[list[int]] = []
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([int(tok) for tok in line.split()])
        if not rows:
            return np.empty((0, 0), dtype=np.int64)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DomainError("inconsistent coordinate counts across lines")
        return np.asarray(rows, dtype=np.int64)

    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return _read(fh)
    return _read(source)
