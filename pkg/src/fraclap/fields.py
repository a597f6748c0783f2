"""Stock evaluable fields with the metadata the operator evaluators need.

Every constructor returns a `Field` (see quadrature.py) whose `eval` is
numpy-vectorized.  Kink metadata records (location, exponent) of algebraic
non-smooth points on the line; exponent 0.0 marks a logarithmic or plain
continuity break.  Decay metadata (gamma, C) asserts |u(y)| <= C (1+|y|)^-gamma
and is what the far-field handling of the evaluators consumes; a negative
gamma declares admissible growth.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .quadrature import Field

# ---------------------------------------------------------------------------
# smooth ramp from the standard bump mollifier, tabulated once at import
# ---------------------------------------------------------------------------

_RAMP_N = 8193
_RAMP_X = np.linspace(-1.0, 1.0, _RAMP_N)
with np.errstate(divide="ignore", over="ignore"):
    _core = np.where(
        np.abs(_RAMP_X) < 1.0,
        np.exp(-1.0 / np.maximum(1.0 - _RAMP_X ** 2, 1e-300)),
        0.0,
    )
_RAMP_Y = np.concatenate(
    ([0.0], np.cumsum(0.5 * (_core[1:] + _core[:-1]) * (_RAMP_X[1] - _RAMP_X[0])))
)
_RAMP_Y /= _RAMP_Y[-1]


def mollifier_ramp(w):
    """Monotone C-smooth ramp: 0 for w <= -1, 1 for w >= 1, strict in between.

    Built from the cumulative integral of exp(-1/(1-t^2)) on a fixed fine
    table; the same table is used everywhere, so identities relating shifted
    and dilated copies of the ramp hold exactly in floating point.
    """
    w = np.asarray(w, dtype=float)
    return np.interp(w, _RAMP_X, _RAMP_Y, left=0.0, right=1.0)


def _radius_sq(x, dim):
    x = np.asarray(x, dtype=float)
    if dim == 1:
        return x * x
    return np.sum(x * x, axis=-1)


# ---------------------------------------------------------------------------
# concrete fields
# ---------------------------------------------------------------------------


def gaussian(n: int = 1) -> Field:
    """u(x) = exp(-pi |x|^2) in n dimensions; unit L1 mass."""
    if n < 1:
        raise DomainError("gaussian: need n >= 1")

    def ev(x):
        return np.exp(-math.pi * _radius_sq(x, n))

    def lap(x):
        r2 = _radius_sq(x, n)
        return np.exp(-math.pi * r2) * (4.0 * math.pi ** 2 * r2 - 2.0 * math.pi * n)

    def grad(x):
        x = np.asarray(x, dtype=float)
        return -2.0 * math.pi * x * np.exp(-math.pi * _radius_sq(x, n))

    return Field(
        eval=ev,
        dim=n,
        decay=(12.0, 200.0),
        smoothness="Cinf",
        laplacian=lap,
        gradient=grad if n == 1 else None,
        name="gaussian",
    )


def bump(radius: float = 1.0, n: int = 1) -> Field:
    """Compactly supported mollifier exp(1 - 1/(1 - (|x|/r)^2)) on |x| < r."""
    if radius <= 0:
        raise DomainError("bump: radius must be positive")
    r2inv = 1.0 / (radius * radius)

    def ev(x):
        q = _radius_sq(x, n) * r2inv
        out = np.zeros_like(q)
        inside = q < 1.0
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - q[inside]))
        return out

    def grad(x):
        # d/dx exp(1 - (1-q)^{-1}) = -2 x / (r^2 (1-q)^2) * u, q = (x/r)^2
        x = np.asarray(x, dtype=float)
        q = x * x * r2inv
        out = np.zeros_like(q)
        inside = q < 1.0
        om = 1.0 - q[inside]
        out[inside] = (
            -2.0 * x[inside] * r2inv / om ** 2 * np.exp(1.0 - 1.0 / om)
        )
        return out

    def lap(x):
        # n-dim radial Laplacian u_rr + (n-1)/r u_r of the same profile
        x = np.asarray(x, dtype=float)
        q = _radius_sq(x, n) * r2inv
        out = np.zeros_like(q)
        inside = q < 1.0
        qi = q[inside]
        om = 1.0 - qi
        u = np.exp(1.0 - 1.0 / om)
        # with w(q) = -1/(1-q):  u' = u w', u'' = u (w'' + w'^2) in q, then
        # chain rule via q = r^2/R^2: Lap = 4q/R^2 (w''+w'^2) u + 2n/R^2 w' u
        wp = -1.0 / om ** 2
        wpp = -2.0 / om ** 3
        out[inside] = r2inv * u * (4.0 * qi * (wpp + wp * wp) + 2.0 * n * wp)
        return out

    return Field(
        eval=ev,
        dim=n,
        support_radius=radius,
        smoothness="Cinf",
        laplacian=lap,
        gradient=grad if n == 1 else None,
        name="bump",
    )


def plateau(inner: float = 1.0, outer: float = 2.0) -> Field:
    """Smooth cutoff: 1 on |x| <= inner, 0 beyond outer, ramp in between."""
    if not (0 < inner < outer):
        raise DomainError("plateau: need 0 < inner < outer")
    scale = 2.0 / (outer - inner)

    def ev(x):
        r = np.abs(np.asarray(x, dtype=float))
        return 1.0 - mollifier_ramp((r - inner) * scale - 1.0)

    return Field(
        eval=ev,
        dim=1,
        support_radius=outer,
        smoothness="Cinf",
        name="plateau",
    )


def sin_field() -> Field:
    """sin(x), period 2 pi, with exact spectral data."""
    return Field(
        eval=lambda x: np.sin(np.asarray(x, dtype=float)),
        dim=1,
        smoothness="Cinf",
        laplacian=lambda x: -np.sin(np.asarray(x, dtype=float)),
        gradient=lambda x: np.cos(np.asarray(x, dtype=float)),
        periodic=2.0 * math.pi,
        periodic_coeffs={1: -0.5j, -1: 0.5j},
        name="sin",
    )


def cos_field() -> Field:
    """cos(x), period 2 pi, with exact spectral data."""
    return Field(
        eval=lambda x: np.cos(np.asarray(x, dtype=float)),
        dim=1,
        smoothness="Cinf",
        laplacian=lambda x: -np.cos(np.asarray(x, dtype=float)),
        gradient=lambda x: -np.sin(np.asarray(x, dtype=float)),
        periodic=2.0 * math.pi,
        periodic_coeffs={1: 0.5, -1: 0.5},
        name="cos",
    )


def _smoothness_from_exponent(alpha: float) -> str:
    if alpha >= 2.0:
        return "C2"
    if alpha >= 1.0:
        return "C1"
    return "C0"


def halfline_power_field(alpha: float) -> Field:
    """u(x) = x_+^alpha on the line; one kink of exponent alpha at 0."""
    if alpha <= -1.0:
        raise DomainError("halfline_power_field: need alpha > -1 for integrability")

    def ev(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0.0
        out[pos] = x[pos] ** alpha
        return out

    def grad(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0.0
        out[pos] = alpha * x[pos] ** (alpha - 1.0)
        return out

    def lap(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0.0
        out[pos] = alpha * (alpha - 1.0) * x[pos] ** (alpha - 2.0)
        return out

    return Field(
        eval=ev,
        dim=1,
        decay=(-alpha, 1.0),
        smoothness=_smoothness_from_exponent(alpha),
        kinks=((0.0, alpha),),
        gradient=grad,
        laplacian=lap,
        name="halfline_power(alpha=%g)" % alpha,
    )


def interval_power_field(alpha: float) -> Field:
    """u(x) = (1 - x^2)_+^alpha; kinks of exponent alpha at both endpoints."""
    if alpha <= -1.0:
        raise DomainError("interval_power_field: need alpha > -1")

    def ev(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < 1.0
        out[inside] = (1.0 - x[inside] ** 2) ** alpha
        return out

    def grad(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < 1.0
        xi = x[inside]
        out[inside] = -2.0 * alpha * xi * (1.0 - xi ** 2) ** (alpha - 1.0)
        return out

    def lap(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < 1.0
        xi = x[inside]
        om = 1.0 - xi ** 2
        out[inside] = (
            -2.0 * alpha * om ** (alpha - 1.0)
            + 4.0 * alpha * (alpha - 1.0) * xi ** 2 * om ** (alpha - 2.0)
        )
        return out

    def prof_minus(eta):
        # u(-1 + eta): inside needs eta in (0, 2); 1 - x^2 = eta (2 - eta)
        eta = np.asarray(eta, dtype=float)
        out = np.zeros_like(eta)
        inside = (eta > 0.0) & (eta < 2.0)
        out[inside] = (eta[inside] * (2.0 - eta[inside])) ** alpha
        return out

    def prof_plus(eta):
        # u(1 + eta): inside needs eta in (-2, 0); 1 - x^2 = (-eta)(2 + eta)
        eta = np.asarray(eta, dtype=float)
        out = np.zeros_like(eta)
        inside = (eta < 0.0) & (eta > -2.0)
        out[inside] = ((-eta[inside]) * (2.0 + eta[inside])) ** alpha
        return out

    return Field(
        eval=ev,
        dim=1,
        support_radius=1.0,
        smoothness=_smoothness_from_exponent(alpha),
        kinks=((-1.0, alpha), (1.0, alpha)),
        gradient=grad,
        laplacian=lap,
        name="interval_power(alpha=%g)" % alpha,
        kink_profiles=(prof_minus, prof_plus),
    )


def ball_power_field(beta: float, n: int = 1) -> Field:
    """u(x) = (1 - |x|^2)_+^beta in n dimensions (line kink metadata for n=1)."""
    if beta <= -1.0:
        raise DomainError("ball_power_field: need beta > -1")
    if n == 1:
        return interval_power_field(beta)

    def ev(x):
        r2 = _radius_sq(x, n)
        out = np.zeros_like(r2)
        inside = r2 < 1.0
        out[inside] = (1.0 - r2[inside]) ** beta
        return out

    return Field(
        eval=ev,
        dim=n,
        support_radius=1.0,
        smoothness=_smoothness_from_exponent(beta),
        kinks=((1.0, beta),),
        name="ball_power(beta=%g, n=%d)" % (beta, n),
    )


def kelvin_power_field(alpha: float, s: float) -> Field:
    """u(x) = (1-x)^alpha (1+x)^{2s-1-alpha} on (-1, 1), zero outside.

    This is the inversion image (center -1, radius sqrt 2) of the half-line
    power x_+^alpha, and coincides with the boundary-kernel profile with pole
    at theta = -1.  Kink exponents: alpha at +1 and 2s-1-alpha at -1.
    """
    if not (0.0 < s < 1.0):
        raise DomainError("kelvin_power_field: order must lie in (0, 1)")
    e_plus = alpha
    e_minus = 2.0 * s - 1.0 - alpha
    if e_plus <= -1.0 or e_minus <= -1.0:
        raise DomainError("kelvin_power_field: endpoint exponent <= -1 (not integrable)")

    def ev(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < 1.0
        xi = x[inside]
        out[inside] = (1.0 - xi) ** e_plus * (1.0 + xi) ** e_minus
        return out

    def prof_plus(eta):
        # u(1 + eta): inside needs eta in (-2, 0); 1 - x = -eta, 1 + x = 2 + eta
        eta = np.asarray(eta, dtype=float)
        out = np.zeros_like(eta)
        inside = (eta < 0.0) & (eta > -2.0)
        ei = eta[inside]
        out[inside] = (-ei) ** e_plus * (2.0 + ei) ** e_minus
        return out

    def prof_minus(eta):
        # u(-1 + eta): inside needs eta in (0, 2); 1 - x = 2 - eta, 1 + x = eta
        eta = np.asarray(eta, dtype=float)
        out = np.zeros_like(eta)
        inside = (eta > 0.0) & (eta < 2.0)
        ei = eta[inside]
        out[inside] = (2.0 - ei) ** e_plus * ei ** e_minus
        return out

    return Field(
        eval=ev,
        dim=1,
        support_radius=1.0,
        smoothness=_smoothness_from_exponent(min(e_plus, e_minus)),
        kinks=((1.0, e_plus), (-1.0, e_minus)),
        name="kelvin_power(alpha=%g, s=%g)" % (alpha, s),
        kink_profiles=(prof_plus, prof_minus),
    )


def boundary_kernel_field(alpha: float, s: float, theta: float = -1.0) -> Field:
    """Boundary-kernel profile (1-x^2)^alpha / |x - theta|^{1-2s+2alpha}, n = 1.

    Only the endpoint poles theta = -1 and theta = +1 are supported; the
    theta = +1 version is the mirror image of the theta = -1 one.
    """
    if theta == -1.0:
        return kelvin_power_field(alpha, s)
    if theta != 1.0:
        raise DomainError("boundary_kernel_field: theta must be -1 or +1 for n = 1")
    base = kelvin_power_field(alpha, s)

    def ev(x):
        return base.eval(-np.asarray(x, dtype=float))

    def _mirror(profile):
        return lambda eta: profile(-np.asarray(eta, dtype=float))

    return Field(
        eval=ev,
        dim=1,
        support_radius=1.0,
        smoothness=base.smoothness,
        kinks=tuple((-loc, e) for loc, e in base.kinks),
        name="boundary_kernel(alpha=%g, s=%g, theta=+1)" % (alpha, s),
        kink_profiles=tuple(_mirror(p) for p in base.kink_profiles),
    )


def radial_power_field(alpha: float, n: int = 1) -> Field:
    """u(x) = |x|^alpha (pure radial power, singular at 0 when alpha < 0)."""

    def ev(x):
        r2 = _radius_sq(x, n)
        out = np.zeros_like(r2)
        pos = r2 > 0.0
        out[pos] = r2[pos] ** (0.5 * alpha)
        if alpha == 0.0:
            out[~pos] = 1.0
        return out

    return Field(
        eval=ev,
        dim=n,
        decay=(-alpha, 1.0),
        smoothness=_smoothness_from_exponent(alpha) if alpha >= 0 else "C0",
        kinks=((0.0, alpha),),
        name="radial_power(alpha=%g, n=%d)" % (alpha, n),
    )


def log_field() -> Field:
    """u(x) = ln |x| on the line; logarithmic singular point at 0."""

    def ev(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(x))

    return Field(
        eval=ev,
        dim=1,
        decay=(-0.05, 10.0),
        smoothness="C0",
        kinks=((0.0, 0.0),),
        gradient=lambda x: 1.0 / np.asarray(x, dtype=float),
        laplacian=lambda x: -1.0 / np.asarray(x, dtype=float) ** 2,
        name="log",
    )
