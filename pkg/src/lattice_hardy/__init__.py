"""Discrete Hardy and Rellich machinery on the integer lattice and the
torus: exact constants, randomized inequality verification, lattice-torus
transfer identities, and variational sharp-constant estimation.
"""

from .constants import (
    BoundBracket,
    discrete_bound_bracket,
    hardy_c1c2,
    hardy_c1c2_exact,
    higher_order_constants,
    hr_c1c2,
    hr_c1c2_exact,
    rellich_beta,
    rellich_c1c2,
    weighted_hardy_constant,
    weighted_hardy_constant_exact,
    weighted_hardy_rellich_constant,
    weighted_hardy_rellich_constant_exact,
    weighted_rellich_constant,
)
from .correspondence import (
    CorrespondenceKind,
    IdentityReport,
    build_psi,
    coefficient_lift,
    random_lattice_function,
    verify_identity_forms,
    verify_identity_lhs_rhs,
)
from .errors import ConvergenceError, DomainError, ResourceError
from .estimator import (
    BoxSpec,
    EstimateResult,
    SweepRow,
    estimate_sharp_constant,
    fit_log_slope,
    quadratic_form_apply,
    sweep,
)
from .lattice_ops import (
    LatticeFunction,
    apply_laplacian,
    apply_laplacian_power,
    backward_difference,
    dirichlet_form,
    rellich_form,
    sum_sq,
    unit_sphere_indicator,
    weighted_norm_sq,
)
from .torus_spectral import (
    QuadratureSpec,
    TrigPoly,
    VerificationReport,
    abs_squared_poly,
    derivative_multiplier,
    multiply_by_omega,
    omega_weighted_integral,
    quadrature_form,
    random_trig_poly,
    verify_higher_order,
    verify_two_parameter_bound,
    verify_weighted_hardy,
    verify_weighted_hardy_rellich,
    verify_weighted_rellich,
    weighted_form,
)

__version__ = "0.1.0"

__all__ = [
    "BoundBracket",
    "BoxSpec",
    "ConvergenceError",
    "CorrespondenceKind",
    "DomainError",
    "EstimateResult",
    "IdentityReport",
    "LatticeFunction",
    "QuadratureSpec",
    "ResourceError",
    "SweepRow",
    "TrigPoly",
    "VerificationReport",
    "abs_squared_poly",
    "apply_laplacian",
    "apply_laplacian_power",
    "backward_difference",
    "build_psi",
    "coefficient_lift",
    "derivative_multiplier",
    "dirichlet_form",
    "discrete_bound_bracket",
    "estimate_sharp_constant",
    "fit_log_slope",
    "hardy_c1c2",
    "hardy_c1c2_exact",
    "higher_order_constants",
    "hr_c1c2",
    "hr_c1c2_exact",
    "multiply_by_omega",
    "omega_weighted_integral",
    "quadratic_form_apply",
    "quadrature_form",
    "random_lattice_function",
    "random_trig_poly",
    "rellich_beta",
    "rellich_c1c2",
    "rellich_form",
    "sum_sq",
    "sweep",
    "unit_sphere_indicator",
    "verify_higher_order",
    "verify_identity_forms",
    "verify_identity_lhs_rhs",
    "verify_two_parameter_bound",
    "verify_weighted_hardy",
    "verify_weighted_hardy_rellich",
    "verify_weighted_rellich",
    "weighted_form",
    "weighted_hardy_constant",
    "weighted_hardy_constant_exact",
    "weighted_hardy_rellich_constant",
    "weighted_hardy_rellich_constant_exact",
    "weighted_norm_sq",
    "weighted_rellich_constant",
]
