"""fraclap: the fractional Laplacian through its equivalent definitions.

Numerical realizations (difference quotients, heat semigroup, Riesz
composition, nonlocal divergence of the nonlocal gradient, spectral
multipliers), closed-form oracles on model profiles, Riesz/Bessel kernels,
and Littlewood-Paley / Besov norms - cross-validated against each other.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ConvergenceError,
    DegenerateConstantError,
    DivergentTailError,
    DomainError,
    FraclapError,
    GammaPoleError,
    InsufficientDecayError,
    MissingLaplacianError,
    QuadratureError,
)
from .quadrature import EvalResult, Field, QuadConfig, integrate_1d, tail_powerlaw
from .specfun import (
    ConstantTable,
    Frac,
    ball_volume,
    bessel_decay_constant,
    beta,
    binom_sum,
    constant_cnms,
    constant_cns,
    constant_dns,
    constant_table,
    gamma,
    hyp2f1,
    hyp2f1_at_one,
    hyp2f1_dx,
    kappa,
    log_gamma,
    reciprocal_gamma,
    riesz_constant,
    sphere_measure,
)
from .fields import (
    ball_power_field,
    boundary_kernel_field,
    bump,
    cos_field,
    gaussian,
    halfline_power_field,
    interval_power_field,
    kelvin_power_field,
    log_field,
    plateau,
    radial_power_field,
    sin_field,
)
from .closed_forms import (
    ball_power,
    ball_power_odd_profile,
    boundary_kernel,
    flap_periodic_series,
    fullline_power,
    halfline_power,
    interval_power,
    kelvin_map,
    kelvin_power,
    kelvin_transform,
    radial_power,
    torsion_constant,
)
from .pointwise_defs import (
    flap_div_grad,
    flap_heat,
    flap_highorder,
    flap_limit_check,
    flap_pv,
    flap_riesz_composition,
    nonlocal_divergence,
    nonlocal_gradient,
    spherical_mean,
)
from .spectral import (
    GridFunction,
    bessel_inverse_spectral,
    bessel_potential_spectral,
    coefficients,
    fft,
    flap_spectral,
    from_field,
    ifft,
    nonlocal_gradient_spectral,
    value_at,
    wavenumbers,
)
from .kernels import (
    HLSReport,
    bessel_convolve_1d,
    bessel_kernel,
    bessel_kernel_field,
    bessel_mass,
    hls_scaling_report,
    bessel_decay_check,
    riesz_convolve_1d,
    riesz_kernel,
    riesz_kernel_field,
    riesz_kernel_gauged,
)
from .besov import (
    DyadicPartition,
    bernstein_ratio,
    besov_norm,
    besov_norm_translation,
    bessel_space_norm,
    build_partition,
    dyadic_phi0,
    lp_block,
    lp_norm,
    random_shell_function,
    sobolev_norm_sq,
)

__all__ = [name for name in dir() if not name.startswith("_")]
