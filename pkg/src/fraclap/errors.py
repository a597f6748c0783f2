"""Exception hierarchy for fraclap.

Every raised error names the violated precondition in its message so the CLI
can surface it verbatim (exit code 3 path).
"""


class FraclapError(Exception):
    """Base class for all library errors."""


class DomainError(FraclapError, ValueError):
    """A parameter lies outside the admissible window of an operation."""


class GammaPoleError(DomainError):
    """Gamma evaluated at a nonpositive integer (a genuine pole)."""


class ConvergenceError(FraclapError):
    """A series or iterative scheme failed to reach tolerance."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature exhausted max_depth without meeting tolerance,
    or the integrand returned a non-finite value."""


class DivergentTailError(DomainError):
    """Requested analytic tail does not converge (exponent window violated)."""


class InsufficientDecayError(DomainError):
    """Field metadata does not guarantee convergence of the nonlocal integral."""


class DegenerateConstantError(DomainError):
    """A normalizing constant's combinatorial denominator vanished."""


class MissingLaplacianError(DomainError):
    """An operation needs Delta(u) but the field is not smooth enough and
    carries no laplacian callback."""


class CapacityError(FraclapError):
    """Exact integer arithmetic refused beyond its declared capacity."""
