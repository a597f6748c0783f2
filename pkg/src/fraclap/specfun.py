"""Special functions and normalization constants, self-contained.

Gamma via a 15-term Lanczos approximation (g = 607/128), extended to negative
non-integer arguments by the rising-product recursion
Gamma(x) = Gamma(x + k) / prod_{j=0}^{k-1} (x + j).  Gauss hypergeometric 2F1
via power series on the unit disk with Euler-integral, Euler-transform and
Pfaff fallbacks near the boundary.  All the fractional-Laplacian
normalization constants live here, each produced by a total function that
raises a typed error at a genuine pole instead of returning garbage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    CapacityError,
    ConvergenceError,
    DegenerateConstantError,
    DomainError,
    GammaPoleError,
)
from .quadrature import EvalResult, QuadConfig, integrate_1d

LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_nonpositive_integer(x: float, tol: float = 0.0) -> bool:
    if x > 0.5:
        return False
    r = round(x)
    return abs(x - r) <= tol * max(1.0, abs(x)) and r <= 0


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError("log_gamma: argument must be positive and finite")
    if x < 0.5:
        # recursion ln G(x) = ln G(x+1) - ln x keeps the Lanczos core on x >= 0.5
        return log_gamma(x + 1.0) - math.log(x)
    acc = _LANCZOS_COEFFS[0]
    for k in range(1, 15):
        acc += _LANCZOS_COEFFS[k] / (x - 1.0 + k)
    t = x + LANCZOS_G - 0.5
    return _HALF_LOG_2PI + (x - 0.5) * math.log(t) - t + math.log(acc)


def gamma(x: float) -> float:
    """Gamma(x) for any non-pole real x; raises GammaPoleError at 0, -1, -2, ..."""
    if not math.isfinite(x):
        raise DomainError("gamma: argument must be finite")
    if x > 0.0:
        lg = log_gamma(x)
        if lg > 709.0:
            return math.inf
        return math.exp(lg)
    if _is_nonpositive_integer(x):
        raise GammaPoleError("gamma: pole at nonpositive integer x = %g" % x)
    # Gamma(x) = Gamma(x + k) / prod_{j=0}^{k-1}(x + j), chosen so x + k > 0
    k = int(math.ceil(-x))
    if x + k == 0.0:
        k += 1
    prod = 1.0
    for j in range(k):
        prod *= x + j
    return gamma(x + k) / prod


def reciprocal_gamma(x: float) -> float:
    """1 / Gamma(x); entire, so returns exactly 0.0 at the poles of Gamma."""
    if not math.isfinite(x):
        raise DomainError("reciprocal_gamma: argument must be finite")
    if _is_nonpositive_integer(x):
        return 0.0
    g = gamma(x)
    if math.isinf(g):
        return 0.0
    return 1.0 / g


def beta(a: float, b: float) -> float:
    """Euler beta B(a, b) for a, b > 0."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError("beta: both arguments must be positive")
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


# ---------------------------------------------------------------------------
# Gauss hypergeometric 2F1
# ---------------------------------------------------------------------------

_HYP_SNAP = 1e-12  # snap nearly-integer parameters so terminating cases terminate


def _terminating_index(v: float) -> Optional[int]:
    """If v is (numerically) a nonpositive integer -m, return m, else None."""
    if v > 0.5:
        return None
    r = round(v)
    if r <= 0 and abs(v - r) <= _HYP_SNAP * max(1.0, abs(v)):
        return -int(r)
    return None


def _hyp2f1_series(a, b, c, x, max_terms):
    total = 1.0
    term = 1.0
    small_streak = 0
    for k in range(max_terms):
        denom = (c + k) * (k + 1.0)
        if denom == 0.0:
            raise DomainError("hyp2f1: series hit the pole of (c)_k, c = %g" % c)
        term *= (a + k) * (b + k) / denom * x
        total += term
        if abs(term) <= 1e-16 * abs(total) + 1e-300:
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
    raise ConvergenceError(
        "hyp2f1: series did not converge after %d terms (x = %g)" % (max_terms, x)
    )


def _hyp2f1_polynomial(a, b, c, x, m):
    total = 1.0
    term = 1.0
    for k in range(m):
        denom = (c + k) * (k + 1.0)
        if denom == 0.0:
            raise DomainError(
                "hyp2f1: terminating series hits the pole of (c)_k before "
                "termination (c = %g)" % c
            )
        term *= (a + k) * (b + k) / denom * x
        total += term
    return total


def _euler_integral(a, b, c, x):
    """2F1 via the Euler integral; requires c > b > 0.  Valid for x < 1."""
    pref = math.exp(log_gamma(c) - log_gamma(b) - log_gamma(c - b))
    cfg = QuadConfig(abs_tol=1e-15, rel_tol=5e-14, max_depth=55)

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0) * (1.0 - x * t) ** (-a)

    res = integrate_1d(
        integrand,
        0.0,
        1.0,
        cfg,
        singular_left=max(0.0, 1.0 - b) or None,
        singular_right=max(0.0, 1.0 - (c - b)) or None,
    )
    return pref * res.value


def _hyp2f1_core(a, b, c, x):
    if x == 0.0:
        return 1.0
    ma, mb = _terminating_index(a), _terminating_index(b)
    if ma is not None or mb is not None:
        if ma is not None and mb is not None:
            m = min(ma, mb)
        else:
            m = ma if ma is not None else mb
        return _hyp2f1_polynomial(a, b, c, x, m)
    if _is_nonpositive_integer(c, tol=_HYP_SNAP):
        raise DomainError("hyp2f1: c = %g is a nonpositive integer" % c)
    if x <= -0.6:
        if x <= -1.0:
            raise DomainError("hyp2f1: argument %g outside (-1, 1)" % x)
        # Pfaff transform maps x in (-1, -0.6) into (0.375, 0.5)
        return (1.0 - x) ** (-a) * _hyp2f1_core(a, c - b, c, x / (x - 1.0))
    if abs(x) <= 0.6:
        return _hyp2f1_series(a, b, c, x, 10_000)
    if x >= 1.0:
        raise DomainError("hyp2f1: argument %g outside (-1, 1)" % x)
    # x in (0.6, 1): prefer the Euler integral, then the Euler transform,
    # finally the (slow but convergent) series.
    for aa, bb in ((a, b), (b, a)):
        if c > bb > 0.0:
            return _euler_integral(aa, bb, c, x)
    pref_exp = c - a - b
    for aa, bb in ((c - a, c - b), (c - b, c - a)):
        if c > bb > 0.0:
            return (1.0 - x) ** pref_exp * _euler_integral(aa, bb, c, x)
    return _hyp2f1_series(a, b, c, x, 200_000)


def hyp2f1(a: float, b: float, c: float, x: float) -> float:
    """Gauss 2F1(a, b; c; x) on the real interval -1 < x < 1."""
    if not (-1.0 < x < 1.0):
        raise DomainError("hyp2f1: argument must lie in (-1, 1), got %g" % x)
    return _hyp2f1_core(a, b, c, x)


def hyp2f1_at_one(a: float, b: float, c: float) -> float:
    """2F1(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b)); needs c - a - b > 0."""
    if not (c - a - b > 0.0):
        raise DomainError("hyp2f1_at_one: requires c - a - b > 0")
    return gamma(c) * gamma(c - a - b) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b)


def hyp2f1_dx(a: float, b: float, c: float, x: float) -> float:
    """d/dx 2F1(a, b; c; x) = (a b / c) 2F1(a+1, b+1; c+1; x)."""
    if not (-1.0 < x < 1.0):
        raise DomainError("hyp2f1_dx: argument must lie in (-1, 1)")
    return a * b / c * _hyp2f1_core(a + 1.0, b + 1.0, c + 1.0, x)


# ---------------------------------------------------------------------------
# geometry helpers
# ---------------------------------------------------------------------------


def sphere_measure(n: int) -> float:
    """Surface measure of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2)."""
    if n < 1:
        raise DomainError("sphere_measure: need n >= 1")
    return 2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0)


def ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1)."""
    if n < 1:
        raise DomainError("ball_volume: need n >= 1")
    return math.pi ** (n / 2.0) / gamma(n / 2.0 + 1.0)


binom = math.comb


def binom_sum(m: int, N: int) -> int:
    """Exact integer sum_{k=-m}^{m} (-1)^k C(2m, m-k) k^N, with 0^0 = 1.

    Vanishes for every odd N and for every N <= 2m - 1; used as a
    consistency oracle for the high-order difference weights.
    """
    if m < 1 or N < 0:
        raise DomainError("binom_sum: need m >= 1 and N >= 0")
    if m > 30:
        raise CapacityError("binom_sum: m > 30 not supported (weights overflow use)")
    total = 0
    for k in range(-m, m + 1):
        kn = 1 if N == 0 else k ** N
        total += (-1) ** (k % 2) * math.comb(2 * m, m - k) * kn
    return total


# ---------------------------------------------------------------------------
# normalization constants
# ---------------------------------------------------------------------------


def _cns_continued(n: int, sigma: float) -> float:
    """Analytic continuation of the second-difference constant to any real
    order sigma away from the poles of Gamma((n + 2 sigma)/2):

        2^{2 sigma} Gamma((n + 2 sigma)/2) sigma (1 - sigma)
        / (pi^{n/2} Gamma(2 - sigma)).

    Zero at sigma in {0, 1} (the classical endpoints); the caller decides
    whether a zero is acceptable.
    """
    if n < 1:
        raise DomainError("constant: need dimension n >= 1")
    half = (n + 2.0 * sigma) / 2.0
    if _is_nonpositive_integer(half):
        raise GammaPoleError(
            "normalization constant: pole of Gamma((n + 2s)/2) at n = %d, s = %g"
            % (n, sigma)
        )
    return (
        2.0 ** (2.0 * sigma)
        * gamma(half)
        * sigma
        * (1.0 - sigma)
        / (math.pi ** (n / 2.0) * gamma(2.0 - sigma))
    )


def constant_cns(n: int, s: float) -> float:
    """Second-difference normalization constant for order s in (-1,0) u (0,1).

    Positive on (0, 1); for s in (-1, 0) the sign follows the continuation
    (for n = 1 it is positive below the pole at s = -1/2, where a
    GammaPoleError is raised).
    """
    if not (-1.0 < s < 1.0) or s == 0.0:
        raise DomainError("constant_cns: order must lie in (-1,0) or (0,1)")
    return _cns_continued(n, s)


def constant_dns(n: int, s: float) -> float:
    """Nonlocal-gradient normalization: 2^s G((n+s+1)/2) / (pi^{n/2} G((1-s)/2))."""
    if not (0.0 < s < 1.0):
        raise DomainError("constant_dns: order must lie in (0, 1)")
    return (
        2.0 ** s
        * gamma((n + s + 1.0) / 2.0)
        / (math.pi ** (n / 2.0) * gamma((1.0 - s) / 2.0))
    )


def constant_cnms(n: int, m: int, s: float) -> float:
    """Normalization for the order-2m difference quotient, s in (0, m).

    Non-integer s:  -cns(n, s) / sum_{k=1}^{m} (-1)^k C(2m, m-k) k^{2s};
    integer s:      2^{2s-1} Gamma(n/2 + s) s! / pi^{n/2}
                    / sum_{k=2}^{m} (-1)^{k-s+1} C(2m, m-k) k^{2s} ln k.
    """
    if m < 1:
        raise DomainError("constant_cnms: need m >= 1")
    if not (0.0 < s < m):
        raise DomainError("constant_cnms: order must lie in (0, m)")
    if s == int(s):
        si = int(s)
        denom = 0.0
        for k in range(2, m + 1):
            denom += (-1.0) ** (k - si + 1) * math.comb(2 * m, m - k) * float(k) ** (
                2 * si
            ) * math.log(k)
        if denom == 0.0:
            raise DegenerateConstantError(
                "constant_cnms: vanishing log-weighted difference sum (m=%d, s=%d)"
                % (m, si)
            )
        num = (
            2.0 ** (2 * si - 1)
            * gamma(n / 2.0 + si)
            * gamma(si + 1.0)
            / math.pi ** (n / 2.0)
        )
        return num / denom
    denom = 0.0
    for k in range(1, m + 1):
        denom += (-1.0) ** k * math.comb(2 * m, m - k) * float(k) ** (2.0 * s)
    if abs(denom) < 1e-14 * math.comb(2 * m, m):
        raise DegenerateConstantError(
            "constant_cnms: difference sum degenerates near integer order s = %g" % s
        )
    return -_cns_continued(n, s) / denom


def riesz_constant(n: int, s: float) -> float:
    """Riesz-potential kernel constant G((n-2s)/2) / (2^{2s} pi^{n/2} G(s))."""
    if n < 1 or not (s > 0.0):
        raise DomainError("riesz_constant: need n >= 1 and s > 0")
    if n == 2.0 * s:
        raise GammaPoleError(
            "riesz_constant: logarithmic case n = 2s (use the log kernel)"
        )
    return gamma((n - 2.0 * s) / 2.0) / (
        2.0 ** (2.0 * s) * math.pi ** (n / 2.0) * gamma(s)
    )


def bessel_decay_constant(n: int, s: float) -> float:
    """Limit constant of |x|^{(n+1)/2 - s} e^{|x|} B(x) as |x| -> infinity."""
    if n < 1 or not (s > 0.0):
        raise DomainError("bessel_decay_constant: need n >= 1 and s > 0")
    return 1.0 / (
        2.0 ** ((n - 1.0) / 2.0 + s) * math.pi ** ((n - 1.0) / 2.0) * gamma(s)
    )


# ---------------------------------------------------------------------------
# the half-line profile constant kappa
# ---------------------------------------------------------------------------


def kappa(
    alpha: float,
    s: float,
    cfg: Optional[QuadConfig] = None,
    *,
    use_exact: bool = True,
) -> float:
    """Profile constant for the half-line power x_+^alpha of order s in (0, 1).

    Defined for alpha in (-1, 2s).  Exact values kappa(s) = kappa(s-1) = 0
    and kappa(0) = kappa(2s-1) = 1/(2s) are returned directly unless
    use_exact=False forces evaluation through the integral representations
    (the route the self-tests exercise).
    """
    if not (0.0 < s < 1.0):
        raise DomainError("kappa: order must lie in (0, 1)")
    if not (-1.0 < alpha < 2.0 * s):
        raise DomainError(
            "kappa: exponent %g outside the admissible range (-1, %g)" % (alpha, 2 * s)
        )
    if use_exact:
        if alpha == s or alpha == s - 1.0:
            return 0.0
        if alpha == 0.0 or alpha == 2.0 * s - 1.0:
            return 1.0 / (2.0 * s)
    cfg = cfg or QuadConfig(abs_tol=1e-14, rel_tol=1e-12, max_depth=55)

    if alpha <= 0.0:
        # reflection symmetry kappa(alpha) = kappa(2s - alpha - 1) moves the
        # exponent into the positive main branch whenever possible
        mirrored = 2.0 * s - alpha - 1.0
        if mirrored > 0.0:
            return kappa(mirrored, s, cfg, use_exact=False)
        # residual window: s <= 1/2 and alpha in [2s-1, 0]; additive form
        if not (s <= 0.5 and 2.0 * s - 1.0 <= alpha):
            raise DomainError("kappa: exponent %g unreachable for s = %g" % (alpha, s))

        def residual(y):
            y = np.asarray(y, dtype=float)
            return (
                (y ** alpha - 1.0)
                * (y ** (2.0 * s - alpha - 1.0) - 1.0)
                / (1.0 - y) ** (1.0 + 2.0 * s)
            )

        sig_l = max(0.0, 1.0 - 2.0 * s, -alpha, 1.0 + alpha - 2.0 * s)
        res = integrate_1d(
            residual,
            0.0,
            1.0,
            cfg,
            singular_left=sig_l or None,
            singular_right=max(0.0, 2.0 * s - 1.0) or None,
        )
        return res.value + 1.0 / (2.0 * s)

    # split at 1/2 and flip the upper half so each singularity sits at the
    # LEFT endpoint, where graded maps produce exact small offsets; near t=0
    # the difference of the two powers of (1-t) is formed through expm1 to
    # dodge the 1 - 1 cancellation
    def lower(t):
        t = np.asarray(t, dtype=float)
        return (
            -((1.0 - t) ** (alpha - 1.0))
            * np.expm1((2.0 * s - 2.0 * alpha) * np.log1p(-t))
            / t ** (2.0 * s)
        )

    def upper(v):
        v = np.asarray(v, dtype=float)
        return (v ** (alpha - 1.0) - v ** (2.0 * s - alpha - 1.0)) / (
            1.0 - v
        ) ** (2.0 * s)

    res_lo = integrate_1d(
        lower, 0.0, 0.5, cfg, singular_left=max(0.0, 2.0 * s - 1.0)
    )
    res_hi = integrate_1d(
        upper,
        0.0,
        0.5,
        cfg,
        singular_left=max(0.0, 1.0 - alpha, 1.0 + alpha - 2.0 * s) or None,
    )
    return alpha / (2.0 * s) * (res_lo.value + res_hi.value)


# ---------------------------------------------------------------------------
# order descriptor and constant table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Frac:
    """Dimension and fractional order carried by every operator evaluation."""

    n: int
    s: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError("Frac: dimension n must be a positive integer")
        if not (self.s > 0.0) or not math.isfinite(self.s):
            raise DomainError("Frac: order s must be positive and finite")


@dataclass(frozen=True)
class ConstantTable:
    """All normalization constants for one (n, s, m) triple."""

    n: int
    s: float
    m: int
    cns: float
    cnms: float
    dns: Optional[float]
    riesz: Optional[float]
    sphere: float
    ball: float


def constant_table(n: int, s: float, m: int = 2) -> ConstantTable:
    """Assemble every constant used by the operator evaluations at (n, s)."""
    if not (0.0 < s < 1.0):
        raise DomainError("constant_table: order must lie in (0, 1)")
    return ConstantTable(
        n=n,
        s=s,
        m=m,
        cns=constant_cns(n, s),
        cnms=constant_cnms(n, m, s),
        dns=constant_dns(n, s),
        riesz=None if n == 2.0 * s else riesz_constant(n, s),
        sphere=sphere_measure(n),
        ball=ball_volume(n),
    )
