"""Closed-form values of the fractional Laplacian on model profiles.

Every function here is an oracle: an exact expression (gamma factors and
Gauss hypergeometric evaluations, plus one explicit 1-d integral for the pure
radial powers) against which the numerical operator definitions are
cross-validated.  Conventions: order s in (0, 1), Fourier symbol
(2 pi |xi|)^{2s} with the e^{-2 pi i x xi} transform.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import DomainError
from .quadrature import EvalResult, QuadConfig, integrate_1d, integrate_radial_2d
from .specfun import (
    constant_cns,
    gamma,
    hyp2f1,
    kappa,
    log_gamma,
    reciprocal_gamma,
    sphere_measure,
)


def _check_order(s: float):
    if not (0.0 < s < 1.0):
        raise DomainError("closed form: order s must lie in (0, 1)")


def halfline_power(alpha: float, s: float, x: float) -> float:
    """Value of the order-s fractional Laplacian of u(y) = y_+^alpha.

    For x > 0 the value is  c(s) kappa(alpha) x^{alpha-2s}; for x < 0 it is
    -c(s) G(alpha+1) G(2s-alpha) / G(2s+1) |x|^{alpha-2s}.  Requires
    alpha in (-1, 2s); x = 0 is outside the pointwise domain.
    """
    _check_order(s)
    if not (-1.0 < alpha < 2.0 * s):
        raise DomainError("halfline_power: alpha must lie in (-1, 2s)")
    if x == 0.0:
        raise DomainError("halfline_power: x = 0 sits on the kink")
    c = constant_cns(1, s)
    if x > 0.0:
        return c * kappa(alpha, s) * x ** (alpha - 2.0 * s)
    ratio = math.exp(
        log_gamma(alpha + 1.0) + log_gamma(2.0 * s - alpha) - log_gamma(2.0 * s + 1.0)
    )
    return -c * ratio * abs(x) ** (alpha - 2.0 * s)


def fullline_power(alpha: float, s: float, x: float) -> float:
    """Fractional Laplacian of |y|^alpha on the line: the two half-line
    contributions combine to  c(s) [kappa(alpha) - B(alpha+1, 2s-alpha)/G(2s+1)
    * G(...)] |x|^{alpha-2s}; vanishes identically at alpha = 2s - 1 (the
    fundamental-solution exponent in one dimension)."""
    _check_order(s)
    if not (-1.0 < alpha < 2.0 * s):
        raise DomainError("fullline_power: alpha must lie in (-1, 2s)")
    if x == 0.0:
        raise DomainError("fullline_power: x = 0 sits on the singular point")
    c = constant_cns(1, s)
    ratio = math.exp(
        log_gamma(alpha + 1.0) + log_gamma(2.0 * s - alpha) - log_gamma(2.0 * s + 1.0)
    )
    return c * (kappa(alpha, s) - ratio) * abs(x) ** (alpha - 2.0 * s)


def interval_power(alpha: float, s: float, x: float) -> float:
    """Fractional Laplacian of (1 - y^2)_+^alpha on the line.

    Inside the interval:  2^{2s} G(1/2+s) G(alpha+1) / (sqrt(pi)
    G(alpha-s+1)) 2F1(s-alpha, 1/2+s; 1/2; x^2)  — zero for alpha = s - 1,
    constant for alpha = s.  Outside (|x| > 1) the analytic continuation in
    the variable 2/(|x|+1).  |x| = 1 is excluded (endpoint kink).
    """
    _check_order(s)
    if alpha <= -1.0:
        raise DomainError("interval_power: need alpha > -1")
    ax = abs(x)
    if ax == 1.0:
        raise DomainError("interval_power: |x| = 1 sits on the kink")
    if ax < 1.0:
        pref = (
            2.0 ** (2.0 * s)
            * gamma(0.5 + s)
            * gamma(alpha + 1.0)
            / math.sqrt(math.pi)
            * reciprocal_gamma(alpha - s + 1.0)
        )
        if pref == 0.0:
            return 0.0
        return pref * hyp2f1(s - alpha, 0.5 + s, 0.5, x * x)
    c = constant_cns(1, s)
    pref = (
        -c
        * 2.0 ** (2.0 * alpha + 1.0)
        * gamma(alpha + 1.0) ** 2
        * reciprocal_gamma(2.0 * alpha + 2.0)
    )
    z = 2.0 / (ax + 1.0)
    return (
        pref
        * (x * x - 1.0) ** (alpha - 2.0 * s)
        * (ax + 1.0) ** (2.0 * s - 2.0 * alpha - 1.0)
        * hyp2f1(2.0 * alpha - 2.0 * s + 1.0, alpha + 1.0, 2.0 * alpha + 2.0, z)
    )


def torsion_constant(s: float, n: int = 1) -> float:
    """The constant value of the fractional Laplacian of (1-|y|^2)_+^s in the
    unit ball:  2^{2s} G((n+2s)/2) G(1+s) / G(n/2)."""
    _check_order(s)
    return 2.0 ** (2.0 * s) * gamma((n + 2.0 * s) / 2.0) * gamma(1.0 + s) / gamma(n / 2.0)


def ball_power(beta: float, n: int, s: float, r: float) -> float:
    """Fractional Laplacian of (1-|y|^2)_+^beta in the unit ball of R^n,
    evaluated at radius r = |x| < 1:

        2^{2s} G((n+2s)/2) G(beta+1) / (G(beta-s+1) G(n/2))
            * 2F1(n/2+s, s-beta; n/2; r^2).

    Vanishes identically for beta = s - 1; constant for beta = s.
    """
    _check_order(s)
    if beta <= -1.0:
        raise DomainError("ball_power: need beta > -1")
    if not (0.0 <= r < 1.0):
        raise DomainError("ball_power: radius must lie in [0, 1)")
    pref = (
        2.0 ** (2.0 * s)
        * gamma((n + 2.0 * s) / 2.0)
        * gamma(beta + 1.0)
        * reciprocal_gamma(beta - s + 1.0)
        / gamma(n / 2.0)
    )
    if pref == 0.0:
        return 0.0
    return pref * hyp2f1(n / 2.0 + s, s - beta, n / 2.0, r * r)


def ball_power_odd_profile(beta: float, n: int, s: float, r: float) -> float:
    """Profile g(r) such that the fractional Laplacian of
    x_j (1-|x|^2)_+^beta equals x_j g(|x|) for |x| < 1:

        2^{2s} G((n+2s)/2 + 1) G(beta+1) / (G(beta-s+1) G(n/2+1))
            * 2F1(n/2+s+1, s-beta; n/2+1; r^2).
    """
    _check_order(s)
    if beta <= -1.0:
        raise DomainError("ball_power_odd_profile: need beta > -1")
    if not (0.0 <= r < 1.0):
        raise DomainError("ball_power_odd_profile: radius must lie in [0, 1)")
    pref = (
        2.0 ** (2.0 * s)
        * gamma((n + 2.0 * s) / 2.0 + 1.0)
        * gamma(beta + 1.0)
        * reciprocal_gamma(beta - s + 1.0)
        / gamma(n / 2.0 + 1.0)
    )
    if pref == 0.0:
        return 0.0
    return pref * hyp2f1(n / 2.0 + s + 1.0, s - beta, n / 2.0 + 1.0, r * r)


def boundary_kernel(alpha: float, n: int, s: float, x, theta) -> float:
    """Fractional Laplacian of (1-|y|^2)_+^alpha / |y - theta|^{n-2s+2alpha}
    (pole theta on the unit sphere), inside the ball:

        4^s c(1, s) kappa(alpha) (1-|x|^2)^{alpha-2s} / |x-theta|^{n-2s+2alpha}.

    Note the one-dimensional constant c(1, s) regardless of n.  Vanishes for
    alpha in {s, s-1}.
    """
    _check_order(s)
    if not (-1.0 < alpha < 2.0 * s):
        raise DomainError("boundary_kernel: alpha must lie in (-1, 2s)")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    tv = np.atleast_1d(np.asarray(theta, dtype=float))
    if xv.shape != (n,) or tv.shape != (n,):
        raise DomainError("boundary_kernel: x and theta must have length n")
    r2 = float(np.dot(xv, xv))
    if not (r2 < 1.0):
        raise DomainError("boundary_kernel: |x| must be < 1")
    if abs(float(np.dot(tv, tv)) - 1.0) > 1e-12:
        raise DomainError("boundary_kernel: theta must lie on the unit sphere")
    d = float(np.linalg.norm(xv - tv))
    return (
        4.0 ** s
        * constant_cns(1, s)
        * kappa(alpha, s)
        * (1.0 - r2) ** (alpha - 2.0 * s)
        / d ** (n - 2.0 * s + 2.0 * alpha)
    )


def kelvin_power(alpha: float, s: float, x: float) -> float:
    """Fractional Laplacian of the inversion image (center -1, radius sqrt 2)
    of the half-line power y_+^alpha, i.e. of
    (1-y)^alpha (1+y)^{2s-1-alpha} on (-1,1):  the boundary-kernel value with
    pole at -1.  Zero for alpha in {s, s-1} (inversion preserves the kernel
    of the operator up to the weight)."""
    return boundary_kernel(alpha, 1, s, [x], [-1.0])


def radial_power(
    alpha: float, n: int, s: float, r: float = 1.0, cfg: Optional[QuadConfig] = None
) -> EvalResult:
    """Fractional Laplacian of |y|^alpha in R^n at radius r: the value at
    r = 1 is the explicit unit-ball integral

        c(n, s) int_{B_1} (|y|^alpha - 1)(|y|^{2s-n-alpha} - 1)
                 / |e_1 - y|^{n+2s} dy,

    and the field scales like r^{alpha-2s}.  Requires alpha in (-n, 2s)
    intersected with (-1, 2s)+... : integrability near 0 and at infinity.
    For n = 1 the angular set is the two points {-1, +1}; for n in {2, 3}
    an adaptive radial x angular quadrature is used.
    """
    _check_order(s)
    if not (-float(n) < alpha < 2.0 * s):
        raise DomainError("radial_power: alpha must lie in (-n, 2s)")
    if r <= 0.0:
        raise DomainError("radial_power: radius must be positive")
    cfg = cfg or QuadConfig(abs_tol=1e-13, rel_tol=1e-11)
    c = constant_cns(n, s)
    b = 2.0 * s - n - alpha

    if n == 1:

        def integrand(t):
            t = np.asarray(t, dtype=float)
            lt = np.log(t)
            return (
                np.expm1(alpha * lt)
                * np.expm1(b * lt)
                * ((1.0 - t) ** (-1.0 - 2.0 * s) + (1.0 + t) ** (-1.0 - 2.0 * s))
            )

        sig_l = max(0.0, -alpha, -b, -(alpha + b))
        res = integrate_1d(
            integrand,
            0.0,
            1.0,
            cfg,
            singular_left=sig_l if sig_l > 0 else None,
            singular_right=max(0.0, 2.0 * s - 1.0) or None,
        )
        val = c * res.value
        return EvalResult(val * r ** (alpha - 2.0 * s), abs(c) * res.err_est, res.n_evals)

    if n > 3:
        raise DomainError("radial_power: dimensions 1..3 supported")

    ang = sphere_measure(n - 1) / 2.0  # measure of S^{n-2}, halved for the
    # built-in factor 2 of the half-annulus reduction

    def f(rad, th):
        th = np.asarray(th, dtype=float)
        lr = math.log(rad)
        prof = math.expm1(alpha * lr) * math.expm1(b * lr) * rad ** (n - 1)
        # |e1 - y|^2 in the cancellation-free form (1-rad)^2 + 4 rad sin^2(th/2)
        dist2 = (1.0 - rad) ** 2 + 4.0 * rad * np.sin(0.5 * th) ** 2
        out = prof * dist2 ** (-(n + 2.0 * s) / 2.0)
        if n == 3:
            out = out * np.sin(th)
        return ang * out

    e_min = n - 1 + min(0.0, alpha, b, alpha + b)
    res = integrate_radial_2d(
        f,
        1.0,
        cfg,
        r_singular_left=max(0.0, -e_min) or None,
        r_singular_right=max(0.0, 2.0 * s - 1.0) or None,
        theta_singular_left=0.0,
    )
    val = c * res.value
    return EvalResult(val * r ** (alpha - 2.0 * s), abs(c) * res.err_est, res.n_evals)


def flap_periodic_series(coeffs: dict, period: float, s: float, x) -> float:
    """Fractional Laplacian of a finite Fourier series
    u(x) = sum_k u_k e^{2 pi i k x / a}: multiply each mode by
    ((2 pi / a) |k|)^{2s}.  Coefficients must be hermitian (u_{-k} equal to
    the conjugate of u_k) so the result is real; any s > 0 is admissible."""
    if not (s > 0.0 and math.isfinite(s)):
        raise DomainError("flap_periodic_series: order s must be positive")
    if not (period > 0.0 and math.isfinite(period)):
        raise DomainError("flap_periodic_series: period must be positive")
    for k, ck in coeffs.items():
        conj = complex(coeffs.get(-k, 0.0))
        if abs(complex(ck) - conj.conjugate()) > 1e-12 * max(1.0, abs(ck)):
            raise DomainError(
                "flap_periodic_series: coefficients are not hermitian "
                "(mode %d vs %d); result would not be real" % (k, -k)
            )
    total = 0.0 + 0.0j
    for k, ck in coeffs.items():
        mult = (2.0 * math.pi * abs(k) / period) ** (2.0 * s)
        total += mult * complex(ck) * np.exp(2j * math.pi * k * x / period)
    return float(total.real)


def kelvin_map(x, radius: float = 1.0, center=0.0):
    """Inversion through the sphere of the given radius and center:
    x -> center + radius^2 (x - center) / |x - center|^2.  Involutive and
    fixing the sphere itself."""
    x = np.asarray(x, dtype=float)
    c = np.asarray(center, dtype=float)
    if not (radius > 0.0):
        raise DomainError("kelvin_map: radius must be positive")
    d = x - c
    r2 = float(np.sum(d * d)) if d.ndim else float(d * d)
    if r2 == 0.0:
        raise DomainError("kelvin_map: the center is the pole of the map")
    return c + radius**2 * d / r2


def kelvin_transform(u, s: float, radius: float, center, x) -> float:
    """Kelvin transform of a field:  u_K(x) = |x - center|^{2s - n} u(K(x))
    with K the inversion through the given sphere.  Maps s-harmonic
    functions to s-harmonic functions."""
    _check_order(s)
    x = np.asarray(x, dtype=float)
    c = np.asarray(center, dtype=float)
    d = x - c
    r2 = float(np.sum(d * d)) if d.ndim else float(d * d)
    if r2 == 0.0:
        raise DomainError("kelvin_transform: the center is the pole of the map")
    n = u.dim
    y = kelvin_map(x, radius, center)
    val = u.eval(np.atleast_1d(y) if n == 1 else y)
    val = float(np.asarray(val, dtype=float).reshape(-1)[0])
    return r2 ** (0.5 * (2.0 * s - n)) * val
