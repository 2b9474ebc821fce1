"""Analytic pair-distance distribution for points drawn uniformly from an n-ball.

For two independent uniform points in B_n(1), the normalized distance
lambda = |x - y| in [0, 2] has

    PDF   P_n(lambda) = n lambda^{n-1} I_{1 - lambda^2/4}((n+1)/2, 1/2)
    CDF   F_n(lambda) = [lambda^n B_{1-lambda^2/4}(a, 1/2)
                         + 2^n B_{lambda^2/4}(a, a)] / B(a, 1/2),  a = (n+1)/2

together with the corresponding 2n-dimensional region volume, exact rational
polynomial forms for odd n, elementary closed forms for n = 2 and 3, and the
large-n mode (which concentrates at sqrt(2)).

The CDF's two-term bracket is computed term by term (no algebraic merging) so
each term can be validated independently against Monte Carlo integration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial

from . import specfun
from .errors import DomainError, UnsupportedDimensionError
from .specfun import BetaParams

__all__ = [
    "EvalMode",
    "DistributionSpec",
    "Lambda",
    "RationalPolynomial",
    "region_volume",
    "cdf",
    "pdf",
    "pdf_closed_form",
    "pdf_polynomial_odd",
    "mode",
    "unit_ball_volume",
]

# Above this dimension lambda^{n-1} and the Gamma factors can leave double
# range, so the log-domain evaluation path is mandatory.
LOG_DOMAIN_REQUIRED_ABOVE = 300

MAX_EXACT_POLY_DIM = 25

_LN_2 = math.log(2.0)
_LN_PI = math.log(math.pi)


class EvalMode(enum.Enum):
    DIRECT = "direct"
    LOG_DOMAIN = "log_domain"


@dataclass(frozen=True)
class DistributionSpec:
    """Dimension plus evaluation strategy for the distance distribution.

    ``eval_mode=None`` picks ``direct`` for n <= 300 and ``log_domain`` above.
    """

    n: int
    eval_mode: EvalMode | str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise DomainError(f"dimension n must be an integer >= 1, got {self.n!r}")
        mode_ = self.eval_mode
        if mode_ is None:
            mode_ = (
                EvalMode.LOG_DOMAIN
                if self.n > LOG_DOMAIN_REQUIRED_ABOVE
                else EvalMode.DIRECT
            )
        elif not isinstance(mode_, EvalMode):
            try:
                mode_ = EvalMode(mode_)
            except ValueError:
                raise DomainError(
                    f"eval_mode must be one of {[m.value for m in EvalMode]}, got {mode_!r}"
                ) from None
        if self.n > LOG_DOMAIN_REQUIRED_ABOVE and mode_ is not EvalMode.LOG_DOMAIN:
            raise DomainError(
                f"n={self.n} exceeds {LOG_DOMAIN_REQUIRED_ABOVE}; eval_mode must be "
                f"log_domain to avoid overflow"
            )
        object.__setattr__(self, "eval_mode", mode_)


@dataclass(frozen=True)
class Lambda:
    """Normalized pair distance; two points of a unit ball are at most 2 apart."""

    value: float

    def __post_init__(self) -> None:
        v = self.value
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise DomainError(f"lambda must be a real number, got {v!r}")
        v = float(v)
        if not math.isfinite(v) or v < 0.0 or v > 2.0:
            raise DomainError(f"lambda must lie in [0, 2], got {v}")
        object.__setattr__(self, "value", v)

    def __float__(self) -> float:
        return self.value


def _lam_value(lam: Lambda | float) -> float:
    if isinstance(lam, Lambda):
        return lam.value
    return Lambda(lam).value


class RationalPolynomial:
    """Polynomial with exact rational coefficients, index = power of lambda."""

    __slots__ = ("coefficients", "__dict__")

    def __init__(self, coefficients) -> None:
        coeffs = tuple(Fraction(c) for c in coefficients)
        if not coeffs:
            raise DomainError("a polynomial needs at least one coefficient")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        self.coefficients = coeffs

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @cached_property
    def _float_coeffs(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coefficients)

    def __call__(self, lam: float) -> float:
        acc = 0.0
        for c in reversed(self._float_coeffs):
            acc = acc * lam + c
        return acc

    def evaluate_exact(self, lam: Fraction) -> Fraction:
        lam = Fraction(lam)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * lam + c
        return acc

    def definite_integral(self, lo: Fraction = Fraction(0), hi: Fraction = Fraction(2)) -> Fraction:
        """Exact integral over [lo, hi] in rational arithmetic."""
        lo, hi = Fraction(lo), Fraction(hi)
        total = Fraction(0)
        for j, c in enumerate(self.coefficients):
            total += c * (hi ** (j + 1) - lo ** (j + 1)) / (j + 1)
        return total

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalPolynomial)
            and self.coefficients == other.coefficients
        )

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"RationalPolynomial({list(self.coefficients)!r})"


def unit_ball_volume(n: int) -> float:
    """Volume of the unit n-ball, pi^{n/2} / Gamma(n/2 + 1)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"dimension n must be an integer >= 1, got {n!r}")
    return math.exp(0.5 * n * _LN_PI - specfun.log_gamma(0.5 * n + 1.0))


def _bracket_log_terms(n: int, lam: float) -> tuple[float, float]:
    """Logs of the two bracket terms of the region-volume/CDF expression,
    each divided by B(a, 1/2):  t1 = lambda^n I_{1-l^2/4}(a, 1/2),
    t2 = 2^n B_{l^2/4}(a, a) / B(a, 1/2)."""
    a = 0.5 * (n + 1)
    x1 = 1.0 - 0.25 * lam * lam
    x2 = 0.25 * lam * lam
    if x1 < 0.0:  # lam = 2 up to roundoff
        x1 = 0.0
    lt1 = n * math.log(lam) + specfun.log_reg_inc_beta(x1, BetaParams(a, 0.5))
    lt2 = (
        n * _LN_2
        + specfun.log_reg_inc_beta(x2, BetaParams(a, a))
        + specfun.log_beta(a, a)
        - specfun.log_beta(a, 0.5)
    )
    return lt1, lt2


def _sum_exp(lt1: float, lt2: float) -> float:
    m = max(lt1, lt2)
    if m == -math.inf:
        return 0.0
    return math.exp(m) * (math.exp(lt1 - m) + math.exp(lt2 - m))


def region_volume(spec: DistributionSpec, lam: Lambda | float) -> float:
    """Volume of the region of pairs (a, b) with |a|<=1, |b|<=1, |a-b|<=lambda.

    Assembled in logarithms (one final exp), which keeps full relative
    accuracy for small n and degrades gracefully to 0.0 when the true value
    is below double range for very large n.
    """
    lam = _lam_value(lam)
    n = spec.n
    if lam == 0.0:
        return 0.0
    a = 0.5 * (n + 1)
    log_pref = (
        _LN_2
        + n * _LN_PI
        - math.log(n)
        - specfun.log_gamma(0.5 * n)
        - specfun.log_gamma(a)
        - specfun.log_gamma(0.5)
        + specfun.log_beta(a, 0.5)  # undo the 1/B(a,1/2) folded into the terms
    )
    lt1, lt2 = _bracket_log_terms(n, lam)
    bracket = _sum_exp(lt1, lt2)
    if bracket == 0.0:
        return 0.0
    return math.exp(log_pref + math.log(bracket))


def cdf(spec: DistributionSpec, lam: Lambda | float) -> float:
    """CDF of the normalized pair distance: P(|x - y| <= lambda)."""
    lam = _lam_value(lam)
    if lam == 0.0:
        return 0.0
    lt1, lt2 = _bracket_log_terms(spec.n, lam)
    value = _sum_exp(lt1, lt2)
    # Guard the [0, 1] invariant against last-ulp roundoff at lambda = 2.
    if value > 1.0:
        value = 1.0
    return value


def _log_pdf(n: int, lam: float) -> float:
    """ln P_n(lambda) for lambda in (0, 2)."""
    a = 0.5 * (n + 1)
    x1 = 1.0 - 0.25 * lam * lam
    if x1 <= 0.0:
        return -math.inf
    return (
        math.log(n)
        + (n - 1) * math.log(lam)
        + specfun.log_reg_inc_beta(x1, BetaParams(a, 0.5))
    )


def pdf(spec: DistributionSpec, lam: Lambda | float) -> float:
    """PDF of the normalized pair distance, n lambda^{n-1} I_{1-l^2/4}(a, 1/2)."""
    lam = _lam_value(lam)
    n = spec.n
    if lam == 0.0:
        return 1.0 if n == 1 else 0.0
    if lam == 2.0:
        return 0.0
    if spec.eval_mode is EvalMode.DIRECT:
        a = 0.5 * (n + 1)
        x1 = 1.0 - 0.25 * lam * lam
        if x1 < 0.0:
            x1 = 0.0
        return n * lam ** (n - 1) * specfun.reg_inc_beta(x1, BetaParams(a, 0.5))
    return math.exp(_log_pdf(n, lam))


def pdf_closed_form(n: int, lam: Lambda | float) -> float:
    """Elementary closed forms for the distance PDF in dimensions 2 and 3."""
    lam = _lam_value(lam)
    if n == 2:
        return (4.0 * lam / math.pi) * math.acos(0.5 * lam) - (
            lam * lam * math.sqrt(4.0 - lam * lam) / math.pi
        )
    if n == 3:
        return 3.0 * lam**2 - 2.25 * lam**3 + 0.1875 * lam**5
    raise UnsupportedDimensionError(
        f"closed forms exist only for n in {{2, 3}}, got n={n!r}"
    )


def pdf_polynomial_odd(n: int) -> RationalPolynomial:
    """Exact rational-coefficient polynomial equal to P_n for odd n.

    Derivation: substitute u = sqrt(1 - t) in B_{1-l^2/4}(m, 1/2) with
    m = (n+1)/2, giving 2 * integral_{l/2}^{1} (1 - u^2)^{m-1} du, expand the
    binomial, and integrate term by term — integer arithmetic throughout.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"dimension n must be an integer >= 1, got {n!r}")
    if n % 2 == 0:
        raise UnsupportedDimensionError(
            f"exact rational polynomials exist only for odd n, got n={n}"
        )
    if n > MAX_EXACT_POLY_DIM:
        raise DomainError(
            f"n={n} exceeds the exact-arithmetic bound {MAX_EXACT_POLY_DIM}"
        )
    m = (n + 1) // 2
    # 2n / B(m, 1/2) with B(m, 1/2) = (m-1)! m! 4^m / (2m)!
    c0 = Fraction(2 * n * factorial(2 * m), factorial(m - 1) * factorial(m) * 4**m)
    coeffs = [Fraction(0)] * (2 * n)
    s_sum = Fraction(0)
    for k in range(m):
        s_k = Fraction((-1) ** k * comb(m - 1, k), 2 * k + 1)
        s_sum += s_k
        coeffs[n + 2 * k] -= c0 * s_k / 2 ** (2 * k + 1)
    coeffs[n - 1] += c0 * s_sum
    poly = RationalPolynomial(coeffs)
    if poly.degree != 2 * n - 1:
        raise AssertionError(f"expected degree {2 * n - 1}, built {poly.degree}")
    return poly


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def mode(spec: DistributionSpec) -> Lambda:
    """Location of the maximum of P_n on [0, 2] (n >= 2).

    Grid bracketing (1000 points, avoiding the flat tails at 0 and 2)
    followed by golden-section refinement of ln P_n to 1e-8 in lambda.
    """
    n = spec.n
    if n < 2:
        raise DomainError("mode requires n >= 2 (P_1 is monotone decreasing)")
    grid_size = 1000
    step = 2.0 / grid_size
    best_k = 1
    best_v = -math.inf
    for k in range(1, grid_size):
        v = _log_pdf(n, k * step)
        if v > best_v:
            best_v = v
            best_k = k
    lo = (best_k - 1) * step
    hi = (best_k + 1) * step
    # Golden-section maximization of ln P_n on [lo, hi].
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = _log_pdf(n, x1)
    f2 = _log_pdf(n, x2)
    while hi - lo > 1e-9:
        if f1 < f2:
            lo = x1
            x1, f1 = x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = _log_pdf(n, x2)
        else:
            hi = x2
            x2, f2 = x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = _log_pdf(n, x1)
    return Lambda(0.5 * (lo + hi))
