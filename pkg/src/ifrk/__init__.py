"""Maximum-bound-preserving integrating factor Runge-Kutta (IFRK) integrators.

Tools for integrating space-discrete semilinear parabolic systems

    du/dt = L u + f(u)

where L is a dissipative linear operator (typically a periodic finite
difference Laplacian, applied spectrally through the FFT) and f is a
pointwise reaction term satisfying f(rho) <= 0 <= f(-rho) for some
bound rho > 0.  The integrators are Runge-Kutta methods applied to the
integrating factor transform of the system, written in Shu-Osher form
so that every stage is a convex combination of forward Euler substeps
propagated by contraction semigroup factors e^{s L}.  Under a step
size restriction tau <= C * omega_0 this structure preserves the
maximum bound |u| <= rho exactly, not just stably.
"""

from .grid import Field, GridMismatchError, GridSpec
from .operators import (
    ContractionReport,
    LinearOperator,
    SpectralResidueError,
    apply_exponential,
    apply_operator,
    build_dense_laplacian,
    build_periodic_laplacian,
    dense_operator,
    mu_inf,
    verify_contraction,
)
from .nonlinearity import (
    ReactionTerm,
    cubic,
    custom_term,
    flory_huggins,
    numeric_stability_radii,
)
from .schemes import (
    BUILTIN_SCHEMES,
    MbpConstants,
    ShuOsherTableau,
    TableauError,
    builtin,
    from_butcher,
    max_timestep,
    mbp_constant,
    validate,
)
from .integrator import StepSizeError, Stepper, integrate
from .diagnostics import (
    MbpReport,
    Record,
    TimeSeries,
    discrete_energy,
    mbp_check,
    sup_norm,
)
from .harness import (
    ConfigError,
    RunConfig,
    run_coarsening,
    run_compare,
    run_convergence_study,
    run_violation_demo,
    tableau_info,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_SCHEMES",
    "ConfigError",
    "ContractionReport",
    "Field",
    "GridMismatchError",
    "GridSpec",
    "LinearOperator",
    "MbpConstants",
    "MbpReport",
    "ReactionTerm",
    "Record",
    "RunConfig",
    "ShuOsherTableau",
    "SpectralResidueError",
    "StepSizeError",
    "Stepper",
    "TableauError",
    "TimeSeries",
    "apply_exponential",
    "apply_operator",
    "build_dense_laplacian",
    "build_periodic_laplacian",
    "builtin",
    "cubic",
    "custom_term",
    "dense_operator",
    "discrete_energy",
    "flory_huggins",
    "from_butcher",
    "integrate",
    "max_timestep",
    "mbp_check",
    "mbp_constant",
    "mu_inf",
    "numeric_stability_radii",
    "run_coarsening",
    "run_compare",
    "run_convergence_study",
    "run_violation_demo",
    "sup_norm",
    "tableau_info",
    "validate",
    "verify_contraction",
]
