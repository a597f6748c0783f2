"""Riesz and Bessel kernels and their convolution diagnostics.

The Riesz kernel is the fundamental solution of the fractional Laplacian
(with a logarithmic expression at the critical order 2s = n); the Bessel
kernel inverts (1 - Laplacian)^s and is evaluated from its subordination
integral  B(r) = (4 pi)^{-n/2} / Gamma(s) int_0^inf e^{-r^2/(4 tau) - tau}
tau^{s - n/2 - 1} d tau, with a Gauss-Hermite saddle-point scheme in the
exponentially small far zone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, InsufficientDecayError
from .quadrature import EvalResult, Field, QuadConfig, integrate_1d
from .specfun import bessel_decay_constant, gamma, riesz_constant, sphere_measure

_HERM80 = np.polynomial.hermite.hermgauss(80)
_HERM56 = np.polynomial.hermite.hermgauss(56)
_FAR_ZONE = 8.0


def riesz_kernel(n: int, s: float, r) -> np.ndarray:
    """Riesz kernel value at radius r:  const * r^{2s-n} for 2s != n, and
    -log(r)/pi at the logarithmic order n = 2s (only n=1, s=1/2 here)."""
    if not (0.0 < s < 1.0):
        raise DomainError("riesz_kernel: order s must lie in (0, 1)")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("riesz_kernel: radius must be positive")
    if n == 2 * s:
        return -np.log(r) / math.pi
    return riesz_constant(n, s) * r ** (2.0 * s - n)


def riesz_kernel_gauged(n: int, s: float, r) -> np.ndarray:
    """Gauged Riesz kernel  const * (r^{2s-n} - 1), continuous in s across
    the logarithmic order 2s = n, where it equals -log(r)/pi.  The gauge
    subtracts the constant whose blow-up (as 2s -> n) cancels the pole of
    the prefactor, leaving the logarithm in the limit."""
    if not (0.0 < s < 1.0):
        raise DomainError("riesz_kernel_gauged: order s must lie in (0, 1)")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("riesz_kernel_gauged: radius must be positive")
    if n == 2 * s:
        return -np.log(r) / math.pi
    return riesz_constant(n, s) * np.expm1((2.0 * s - n) * np.log(r))


def riesz_kernel_field(s: float, cfg: Optional[QuadConfig] = None) -> Field:
    """One-dimensional Riesz kernel wrapped as a Field with honest decay and
    kink metadata, for use as a convolution factor."""
    if not (0.0 < s < 1.0):
        raise DomainError("riesz_kernel_field: order s must lie in (0, 1)")
    if s == 0.5:

        def ev(pts):
            pts = np.asarray(pts, dtype=float)
            return -np.log(np.abs(pts)) / math.pi

        return Field(
            eval=ev,
            dim=1,
            decay=(-0.05, 10.0),
            smoothness="C0",
            kinks=((0.0, 0.0),),
            name="riesz-kernel[s=0.5]",
        )
    pref = riesz_constant(1, s)

    def ev(pts):
        pts = np.asarray(pts, dtype=float)
        return pref * np.abs(pts) ** (2.0 * s - 1.0)

    return Field(
        eval=ev,
        dim=1,
        decay=(1.0 - 2.0 * s, abs(pref)) if s < 0.5 else (-(2.0 * s - 1.0), abs(pref)),
        smoothness="C0",
        kinks=((0.0, 2.0 * s - 1.0),),
        name="riesz-kernel[s=%g]" % s,
    )


# ---------------------------------------------------------------------------
# Bessel kernel
# ---------------------------------------------------------------------------


def _bessel_far(n: int, s: float, r: float):
    """Far-zone evaluation: substituting t = r/(2 sqrt(tau)) - sqrt(tau)
    turns the subordination integral into  e^{-r} int e^{-t^2} 2 tau(t)^{s-n/2}
    / sqrt(2r + t^2) dt  with tau(t) resolved cancellation-free."""

    def quad(nodes, weights):
        t = nodes
        root = np.sqrt(2.0 * r + t * t)
        tau = np.where(
            t > 0.0,
            0.5 * r * r / (r + t * t + t * root),
            0.5 * (r + t * t + np.abs(t) * root),
        )
        vals = 2.0 * tau ** (s - n / 2.0) / root
        return float(weights @ vals)

    i80 = quad(*_HERM80)
    i56 = quad(*_HERM56)
    pref = math.exp(-r) / ((4.0 * math.pi) ** (n / 2.0) * gamma(s))
    return pref * i80, abs(pref) * abs(i80 - i56), _HERM80[0].size + _HERM56[0].size


def bessel_kernel(
    n: int, s: float, r: float, cfg: Optional[QuadConfig] = None
) -> EvalResult:
    """Bessel kernel B(r) for the potential (1 - Laplacian)^{-s} in R^n."""
    if not (s > 0.0 and math.isfinite(s)):
        raise DomainError("bessel_kernel: order s must be positive")
    if n < 1:
        raise DomainError("bessel_kernel: dimension must be at least 1")
    cfg = cfg or QuadConfig(abs_tol=1e-14, rel_tol=1e-12)
    if r < 0.0:
        raise DomainError("bessel_kernel: radius must be nonnegative")
    if r == 0.0:
        if 2.0 * s > n:
            val = gamma(s - n / 2.0) / ((4.0 * math.pi) ** (n / 2.0) * gamma(s))
            return EvalResult(val, 0.0, 0)
        raise DomainError("bessel_kernel: diverges at r = 0 when 2s <= n")
    if r >= _FAR_ZONE:
        val, err, ne = _bessel_far(n, s, r)
        return EvalResult(val, err, ne)

    a_split = max(1.0, r)
    v_min = math.log(r * r / 3200.0)
    expo = s - n / 2.0

    def near_log(v):
        v = np.asarray(v, dtype=float)
        tau = np.exp(v)
        return np.exp(-r * r / (4.0 * tau) - tau + expo * v)

    res1 = integrate_1d(near_log, v_min, math.log(a_split), cfg)

    def far_tau(tau):
        tau = np.asarray(tau, dtype=float)
        return np.exp(-r * r / (4.0 * tau) - tau) * tau ** (expo - 1.0)

    res2 = integrate_1d(far_tau, a_split, np.inf, cfg)
    pref = 1.0 / ((4.0 * math.pi) ** (n / 2.0) * gamma(s))
    return EvalResult(
        pref * (res1.value + res2.value),
        abs(pref) * (res1.err_est + res2.err_est),
        res1.n_evals + res2.n_evals,
    )


def bessel_kernel_field(s: float, cfg: Optional[QuadConfig] = None) -> Field:
    """One-dimensional Bessel kernel as a Field (cached pointwise values)."""
    if not (0.0 < s < 1.0):
        raise DomainError("bessel_kernel_field: order s must lie in (0, 1)")
    inner = cfg or QuadConfig(abs_tol=1e-14, rel_tol=1e-12)
    cache: dict = {}

    def ev(pts):
        pts = np.atleast_1d(np.asarray(pts, dtype=float))
        out = np.empty(pts.shape)
        for i, p in enumerate(pts):
            key = abs(float(p))
            if key not in cache:
                cache[key] = bessel_kernel(1, s, key, inner).value
            out[i] = cache[key]
        return out

    return Field(
        eval=ev,
        dim=1,
        decay=(3.0, 50.0),
        smoothness="C0",
        kinks=((0.0, min(2.0 * s - 1.0, 0.0)),),
        name="bessel-kernel[s=%g]" % s,
    )


def bessel_mass(n: int, s: float, cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Total integral of the Bessel kernel over R^n (exactly 1, since its
    Fourier transform is (1 + 4 pi^2 |xi|^2)^{-s})."""
    if n not in (1, 2, 3):
        raise DomainError("bessel_mass: dimensions 1..3 supported")
    cfg = cfg or QuadConfig(abs_tol=1e-12, rel_tol=1e-10)
    inner = QuadConfig(abs_tol=1e-14, rel_tol=1e-12)
    state = {"err": 0.0, "evals": 0}

    def integrand(rs):
        rs = np.atleast_1d(np.asarray(rs, dtype=float))
        out = np.empty(rs.shape)
        for i, r in enumerate(rs):
            res = bessel_kernel(n, s, float(r), inner)
            # the kernel error enters the radial integrand with the same
            # r^{n-1} Jacobian as the value does
            state["err"] = max(state["err"], res.err_est * r ** (n - 1))
            state["evals"] += res.n_evals
            out[i] = res.value * r ** (n - 1)
        return out

    if s == 0.5 and n == 1:
        sig_l = 0.5
    else:
        sig_l = max(0.0, 1.0 - 2.0 * s)
    res_near = integrate_1d(
        integrand, 0.0, _FAR_ZONE, cfg, singular_left=sig_l if sig_l > 0 else None
    )
    res_far = integrate_1d(integrand, _FAR_ZONE, np.inf, cfg)
    total = sphere_measure(n) * (res_near.value + res_far.value)
    err = sphere_measure(n) * (
        res_near.err_est + res_far.err_est + 20.0 * state["err"]
    )
    return EvalResult(total, err, res_near.n_evals + res_far.n_evals + state["evals"])


def bessel_decay_check(n: int, s: float, r: float) -> tuple:
    """Return (measured, limit) for the decay law
    r^{(n+1)/2 - s} e^{r} B(r) -> 2^{-(n-1)/2 - s} pi^{-(n-1)/2} / Gamma(s)."""
    if r < _FAR_ZONE:
        raise DomainError("bessel_decay_check probes the far zone (r >= 8)")
    b = bessel_kernel(n, s, r)
    measured = r ** ((n + 1) / 2.0 - s) * math.exp(r) * b.value
    return measured, bessel_decay_constant(n, s)


# ---------------------------------------------------------------------------
# one-dimensional convolutions
# ---------------------------------------------------------------------------


def _convolve_1d(
    f: Field,
    kernel_eval,
    sig_left: float,
    two_s_eff: float,
    x: float,
    cfg: QuadConfig,
    logarithmic: bool,
) -> EvalResult:
    """int_0^inf (f(x+rho) + f(x-rho)) k(rho) drho with kernel metadata."""
    if f.dim != 1:
        raise DomainError("convolutions are implemented in dimension 1")
    x = float(x)

    def integrand(rho):
        rho = np.asarray(rho, dtype=float)
        pair = np.asarray(f.eval(x + rho), dtype=float) + np.asarray(
            f.eval(x - rho), dtype=float
        )
        return pair * kernel_eval(rho)

    radii: dict = {}
    for loc, expo in f.kinks:
        r = abs(loc - x)
        sg = max(0.0, -float(expo))
        if r > 1e-12:
            radii[round(r, 14)] = max(radii.get(round(r, 14), 0.0), sg)
        else:
            # kink sitting at the evaluation point: merge with the kernel
            # singularity at rho = 0
            sig_left = max(sig_left, sg)
    value_err_evals = [0.0, 0.0, 0]

    def accumulate(res: EvalResult):
        value_err_evals[0] += res.value
        value_err_evals[1] += res.err_est
        value_err_evals[2] += res.n_evals

    if f.support_radius is not None:
        Rf = f.support_radius
        if abs(x) > Rf + 0.5:
            # far from the support the rho-form f(x - rho) quantizes the
            # support window onto the ulp(x) grid (and loses it entirely once
            # ulp(x) > width); integrate in t-space instead, where the kernel
            # argument |x - t| >= |x| - Rf stays away from the singularity
            def direct(t):
                t = np.asarray(t, dtype=float)
                return np.asarray(f.eval(t), dtype=float) * kernel_eval(
                    np.abs(x - t)
                )

            t_int = tuple(
                (loc, max(0.0, -float(expo)))
                for loc, expo in sorted(f.kinks)
                if -Rf < loc < Rf and expo < 0
            )
            t_bps = tuple(
                loc
                for loc, expo in sorted(f.kinks)
                if -Rf < loc < Rf and expo >= 0
            )
            return integrate_1d(
                direct,
                -Rf,
                Rf,
                cfg,
                breakpoints=t_bps,
                interior_singularities=t_int,
            )
        R = Rf + abs(x) + 1e-9
        if abs(x) > Rf + 1e-9:
            # just outside the support: mark the window edge so the mass
            # cannot fall between the nodes of a single wide panel
            radii.setdefault(round(abs(x) - Rf, 14), 0.0)
        interior = tuple((r, sg) for r, sg in sorted(radii.items()) if 0 < r < R and sg > 0)
        bps = tuple(r for r, sg in sorted(radii.items()) if 0 < r < R and sg == 0)
        accumulate(
            integrate_1d(
                integrand,
                0.0,
                R,
                cfg,
                singular_left=sig_left if sig_left > 0 else None,
                breakpoints=bps,
                interior_singularities=interior,
            )
        )
    elif f.decay is not None:
        gam = f.decay[0]
        if gam - two_s_eff < 0.05:
            raise InsufficientDecayError(
                "convolution tail too close to divergent: kernel growth "
                "order %.3g needs decay gamma > %.3g" % (two_s_eff, two_s_eff)
            )
        R = max(cfg.truncation_radius, (max(radii) + 1.0) if radii else 0.0)
        interior = tuple((r, sg) for r, sg in sorted(radii.items()) if 0 < r < R and sg > 0)
        bps = tuple(r for r, sg in sorted(radii.items()) if 0 < r < R and sg == 0)
        accumulate(
            integrate_1d(
                integrand,
                0.0,
                R,
                cfg,
                singular_left=sig_left if sig_left > 0 else None,
                breakpoints=bps,
                interior_singularities=interior,
            )
        )
        sig_r = max(0.0, 1.0 - (gam - two_s_eff))
        if logarithmic:
            sig_r = min(0.95, sig_r + 0.05)
        accumulate(
            integrate_1d(
                integrand, R, np.inf, cfg, singular_right=sig_r if sig_r > 0 else None
            )
        )
    else:
        raise InsufficientDecayError(
            "convolution requires compact support or decay metadata on f"
        )
    return EvalResult(*value_err_evals)


def riesz_convolve_1d(
    f: Field, s: float, x: float, cfg: Optional[QuadConfig] = None
) -> EvalResult:
    """Riesz potential of f at x in dimension 1:
    (kernel * f)(x) with kernel const |.|^{2s-1}, or -(1/pi) log|.| at s=1/2."""
    if not (0.0 < s < 1.0):
        raise DomainError("riesz_convolve_1d: order s must lie in (0, 1)")
    cfg = cfg or QuadConfig()
    if s == 0.5:

        def kern(rho):
            return -np.log(rho) / math.pi

        return _convolve_1d(f, kern, 0.5, 1.0, x, cfg, logarithmic=True)
    pref = riesz_constant(1, s)

    def kern(rho):
        return pref * rho ** (2.0 * s - 1.0)

    return _convolve_1d(f, kern, max(0.0, 1.0 - 2.0 * s), 2.0 * s, x, cfg, False)


def bessel_convolve_1d(
    f: Field, s: float, x: float, cfg: Optional[QuadConfig] = None
) -> EvalResult:
    """Bessel potential of f at x in dimension 1: (B_s * f)(x)."""
    if not (0.0 < s < 1.0):
        raise DomainError("bessel_convolve_1d: order s must lie in (0, 1)")
    cfg = cfg or QuadConfig()
    kernel_field = bessel_kernel_field(s)

    def kern(rho):
        return kernel_field.eval(rho)

    sig_l = 0.5 if s == 0.5 else max(0.0, 1.0 - 2.0 * s)
    # exponential kernel decay dominates every power law; treat the kernel
    # as (effective) growth order 0 for the tail routing
    return _convolve_1d(f, kern, sig_l, 0.0, x, cfg, logarithmic=False)


# ---------------------------------------------------------------------------
# scaling invariance of the Riesz-potential inequality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HLSReport:
    s: float
    p: float
    q: float
    rows: tuple  # (theta, lp_norm_f, lq_norm_of_potential, ratio)
    spread: float


def _lp_norm_supported(f: Field, p: float, cfg: QuadConfig) -> float:
    R = f.support_radius
    bps = tuple(loc for loc, _ in f.kinks if -R < loc < R)

    def integrand(y):
        return np.abs(np.asarray(f.eval(np.asarray(y, dtype=float)), dtype=float)) ** p

    res = integrate_1d(integrand, -R, R, cfg, breakpoints=bps)
    return res.value ** (1.0 / p)


def hls_scaling_report(
    f: Field,
    s: float,
    p: float,
    thetas: Sequence[float] = (0.5, 1.0, 2.0),
    cfg: Optional[QuadConfig] = None,
) -> HLSReport:
    """Ratios  |riesz potential of f_theta|_q / |f_theta|_p  for the dilations
    f_theta(x) = f(theta x), with 1/q = 1/p - 2s (dimension 1).  The Riesz
    potential inequality is scale invariant, so the ratio must not depend on
    theta; `spread` is the relative spread across the dilations."""
    if not (p > 1.0):
        raise DomainError("hls_scaling_report: need p > 1")
    if not (0.0 < s < 0.5):
        raise DomainError("hls_scaling_report: need s in (0, 1/2) in dimension 1")
    if 2.0 * s * p >= 1.0:
        raise DomainError("hls_scaling_report: need 2 s p < 1 for finite q")
    if f.support_radius is None:
        raise DomainError("hls_scaling_report: f must have compact support")
    q = p / (1.0 - 2.0 * s * p)
    cfg = cfg or QuadConfig(abs_tol=1e-10, rel_tol=1e-8)
    rows = []
    x_cut = 60.0
    for theta in thetas:
        if theta <= 0.0:
            raise DomainError("hls_scaling_report: dilations must be positive")
        f_theta = Field(
            eval=lambda pts, th=theta: f.eval(np.asarray(pts, dtype=float) * th),
            dim=1,
            support_radius=f.support_radius / theta,
            smoothness=f.smoothness,
            kinks=tuple((loc / theta, e) for loc, e in f.kinks),
            name="%s@%g" % (f.name or "f", theta),
        )
        norm_f = _lp_norm_supported(f_theta, p, cfg)

        cache: dict = {}

        def g_at(y: float, th=theta, ft=f_theta) -> float:
            key = round(float(y), 12)
            if key not in cache:
                cache[key] = riesz_convolve_1d(ft, s, float(y), cfg).value
            return cache[key]

        def gq(ys):
            ys = np.atleast_1d(np.asarray(ys, dtype=float))
            return np.array([abs(g_at(float(y))) ** q for y in ys])

        sup = f_theta.support_radius
        res = integrate_1d(gq, -x_cut, x_cut, cfg, breakpoints=(-sup, sup))
        # power-law tails: |g(y)| ~ const |y|^{2s-1} for |y| -> inf
        tail = 0.0
        for sign in (-1.0, 1.0):
            g_edge = abs(g_at(sign * x_cut))
            tail += g_edge**q * x_cut / ((1.0 - 2.0 * s) * q - 1.0)
        norm_g = (res.value + tail) ** (1.0 / q)
        rows.append((theta, norm_f, norm_g, norm_g / norm_f))
    ratios = [r[3] for r in rows]
    mean = sum(ratios) / len(ratios)
    spread = (max(ratios) - min(ratios)) / mean
    return HLSReport(s, p, q, tuple(rows), spread)
