"""Numerically robust special functions: log-Gamma, Beta, incomplete Beta.

All routines are scalar, pure, and reentrant.  Accuracy targets (contractual,
enforced by the test suite):

* ``log_gamma``: relative error <= 1e-13 on [0.5, 1e6], including in the
  neighbourhoods of its zeros at z = 1 and z = 2 where naive Stirling-plus-
  recurrence schemes lose all relative accuracy.
* ``reg_inc_beta``: absolute error <= 1e-12 on [0, 1] for positive shapes.

The incomplete Beta uses the classical continued fraction evaluated with the
modified Lentz method, switching to the complement when x exceeds the
crossover point (a+1)/(a+b+2) so the fraction always converges quickly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

__all__ = [
    "BetaParams",
    "log_gamma",
    "log_beta",
    "beta",
    "reg_inc_beta",
    "inc_beta",
    "log_reg_inc_beta",
]

# zeta(k) - 1 for k = 2..28, feeding the Taylor expansion of log Gamma about
# its zeros: log Gamma(2 + e) = e(1-gamma) + sum_{k>=2} (-1)^k (zeta(k)-1) e^k / k.
_ZETA_MINUS_ONE = (
    0.64493406684822644,
    0.20205690315959429,
    0.082323233711138192,
    0.036927755143369926,
    0.017343061984449140,
    0.0083492773819228268,
    0.0040773561979443394,
    0.0020083928260822144,
    0.00099457512781808534,
    0.00049418860411946456,
    0.00024608655330804830,
    0.00012271334757848915,
    6.1248135058704829e-05,
    3.0588236307020494e-05,
    1.5282259408651872e-05,
    7.6371976378997623e-06,
    3.8172932649998399e-06,
    1.9082127165539389e-06,
    9.5396203387279611e-07,
    4.7693298678780646e-07,
    2.3845050272773299e-07,
    1.1921992596531107e-07,
    5.9608189051259480e-08,
    2.9803503514652280e-08,
    1.4901554828365041e-08,
    7.4507117898354295e-09,
    3.7253340247884571e-09,
)
_EULER_GAMMA = 0.57721566490153286
_HALF_LOG_TWO_PI = 0.91893853320467274
# B_{2k} / (2k(2k-1)) for k = 1..8: coefficients of the Stirling asymptotic
# correction sum_k c_k / z^{2k-1}.
_STIRLING_COEFFS = (
    0.083333333333333333,
    -0.0027777777777777778,
    0.00079365079365079365,
    -0.00059523809523809524,
    0.00084175084175084175,
    -0.0019175269175269175,
    0.0064102564102564103,
    -0.029550653594771242,
)
_STIRLING_MIN_Z = 15.0

_CF_MAX_ITER = 500
_CF_EPS = 1e-16
_CF_TINY = 1e-300


@dataclass(frozen=True)
class BetaParams:
    """Shape parameters (a, b) of the Beta family; both must be positive."""

    a: float
    b: float

    def __post_init__(self) -> None:
        for name, value in (("a", self.a), ("b", self.b)):
            if not isinstance(value, (int, float)):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be finite and positive, got {value}")


def _as_params(p) -> BetaParams:
    if isinstance(p, BetaParams):
        return p
    try:
        a, b = p
    except (TypeError, ValueError):
        raise DomainError(f"expected BetaParams or an (a, b) pair, got {p!r}") from None
    return BetaParams(float(a), float(b))


def _lgamma_zero_series(eps: float) -> float:
    """log Gamma(2 + eps) for |eps| <= 0.3 via the zeta series (full relative
    accuracy right at the zero, where Stirling-based routes cancel)."""
    acc = 0.0
    for k in range(len(_ZETA_MINUS_ONE) + 1, 1, -1):
        c = _ZETA_MINUS_ONE[k - 2] / k
        if k & 1:
            c = -c
        acc = (acc + c) * eps
    return (acc + (1.0 - _EULER_GAMMA)) * eps


def _lgamma_stirling(z: float) -> float:
    """Stirling asymptotic series; accurate to ~1e-16 relative for z >= 15."""
    w = 1.0 / z
    w2 = w * w
    corr = 0.0
    for c in reversed(_STIRLING_COEFFS):
        corr = (corr + c) * w2
    corr /= w  # sum c_k w^{2k-1}
    return (z - 0.5) * math.log(z) - z + _HALF_LOG_TWO_PI + corr


def log_gamma(z: float) -> float:
    """Natural log of the Gamma function for z > 0.

    Relative error <= 1e-13 across [0.5, 1e6]; the Taylor windows around the
    zeros z=1 and z=2 keep that bound where ln Gamma itself vanishes.
    """
    z = float(z)
    if not math.isfinite(z) or z <= 0.0:
        raise DomainError(f"log_gamma requires finite z > 0, got {z}")
    if z <= 1.5:
        eps = z - 1.0
        # Gamma(1+e) = Gamma(2+e)/(1+e); log1p(e) = log(z) blows up benignly
        # as z -> 0, and the series truncation only degrades below z ~ 0.3,
        # outside the accuracy contract.
        return _lgamma_zero_series(eps) - math.log1p(eps)
    if z <= 2.5:
        return _lgamma_zero_series(z - 2.0)
    if z >= _STIRLING_MIN_Z:
        return _lgamma_stirling(z)
    # Push the argument into the asymptotic range with the recurrence
    # Gamma(z) = Gamma(z+m) / (z (z+1) ... (z+m-1)).
    shift = 1.0
    zz = z
    while zz < _STIRLING_MIN_Z:
        shift *= zz
        zz += 1.0
    return _lgamma_stirling(zz) - math.log(shift)


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) for positive a, b."""
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def beta(p: BetaParams) -> float:
    """The Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b)."""
    p = _as_params(p)
    return math.exp(log_beta(p.a, p.b))


def _contfrac(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete Beta (modified Lentz).

    Converges rapidly for x <= (a+1)/(a+b+2); callers must arrange that.
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        num = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + num * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + num / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + num * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + num / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _CF_EPS:
            return h
    raise ConvergenceError(
        f"incomplete-beta continued fraction did not converge for a={a}, b={b}, x={x}"
    )


def _validate_x(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0.0 or x > 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    return x


def reg_inc_beta(x: float, p: BetaParams) -> float:
    """Regularized incomplete Beta I_x(a, b), the Beta(a,b) CDF at x.

    Absolute error <= 1e-12; monotone nondecreasing in x.  Evaluates the
    continued fraction directly below the crossover x = (a+1)/(a+b+2) and via
    the reflection I_x(a,b) = 1 - I_{1-x}(b,a) above it.
    """
    x = _validate_x(x)
    p = _as_params(p)
    a, b = p.a, p.b
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_pref = a * math.log(x) + b * math.log1p(-x) - log_beta(a, b)
    if x <= (a + 1.0) / (a + b + 2.0):
        return math.exp(ln_pref) * _contfrac(a, b, x) / a
    return 1.0 - math.exp(ln_pref) * _contfrac(b, a, 1.0 - x) / b


def inc_beta(x: float, p: BetaParams) -> float:
    """Incomplete Beta B_x(a, b) = I_x(a, b) * B(a, b)."""
    p = _as_params(p)
    return reg_inc_beta(x, p) * beta(p)


def log_reg_inc_beta(x: float, p: BetaParams) -> float:
    """ln I_x(a, b), stable even where I_x underflows a double.

    Returns -inf at x = 0.  On the direct branch the logarithm is assembled
    from logs of the prefactor and the continued-fraction value, so results
    like ln I ~ -10^5 come out with small relative error.
    """
    x = _validate_x(x)
    p = _as_params(p)
    a, b = p.a, p.b
    if x == 0.0:
        return -math.inf
    if x == 1.0:
        return 0.0
    ln_pref = a * math.log(x) + b * math.log1p(-x) - log_beta(a, b)
    if x <= (a + 1.0) / (a + b + 2.0):
        return ln_pref + math.log(_contfrac(a, b, x)) - math.log(a)
    complement = math.exp(ln_pref) * _contfrac(b, a, 1.0 - x) / b
    if complement >= 1.0:
        # Roundoff pushed 1 - I past zero; I itself is below double resolution.
        return -math.inf
    return math.log1p(-complement)
