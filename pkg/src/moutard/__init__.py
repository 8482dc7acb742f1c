"""Moutard transforms of the 2D Schrodinger operator with polynomial generators.

Monic polynomial generating functions turn the Moutard transform of the free
operator into a finite family of -8*pi point potentials at the polynomial's
roots, with closed-form eigenfunctions, explicitly computable scattering data
(a = -2N/lambda, b = 0), and exact root dynamics under dP/dt = d^3P/dz^3.
This package computes all of those objects and, more importantly, verifies
them: exact-arithmetic identity certificates, stencil residuals for the
defining first-order system, gauge-invariance and harmonicity checks, and
scattering fits whose reflectionless coefficient is measured, not assumed.
"""

from .cpoly import (
    ComplexPoly,
    RootSet,
    DEFAULT_MAX_ITER,
    DEFAULT_ROOT_TOL,
    derivative,
    differentiate,
    evaluate,
    from_roots,
    horner,
    min_root_separation,
    roots,
)
from .errors import (
    AmbiguousMatching,
    DegenerateDesign,
    InconsistentData,
    InsufficientRoots,
    IoFailure,
    MoutardError,
    NearPole,
    NonConvergence,
    NonFinite,
    NonPositiveOmega,
    RadiusTooSmall,
    ZeroLambda,
)
from .flow import (
    CollisionEvent,
    FlowState,
    RootTrajectory,
    d3_apply,
    evolve,
    potential_at,
    trajectory,
    verify_flow,
)
from .scattering import (
    DEFAULT_RADIUS_FACTOR,
    DEFAULT_SAMPLE_COUNT,
    ScatteringEstimate,
    count_deltas,
    expected_a,
    fit_scattering,
    sample_mu,
)
from .transform import (
    DELTA_WEIGHT,
    VERIFY_STENCIL,
    DeltaPotential,
    FaddeevParams,
    SmoothMoutardInput,
    faddeev_psi,
    gauge_shift,
    harmonicity_check,
    moutard_residual,
    residual_sample_points,
    smooth_moutard_potential,
    transformed_potential,
    verify_eigenfunction_identity,
)
from .wirtinger import (
    DEFAULT_STENCIL,
    FIRST_ORDER_STEP_SCALE,
    LAPLACIAN_STEP_SCALE,
    StencilConfig,
    d_z,
    d_zbar,
    laplacian,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousMatching",
    "CollisionEvent",
    "ComplexPoly",
    "DEFAULT_MAX_ITER",
    "DEFAULT_RADIUS_FACTOR",
    "DEFAULT_ROOT_TOL",
    "DEFAULT_SAMPLE_COUNT",
    "DEFAULT_STENCIL",
    "DELTA_WEIGHT",
    "DegenerateDesign",
    "DeltaPotential",
    "FIRST_ORDER_STEP_SCALE",
    "FaddeevParams",
    "FlowState",
    "InconsistentData",
    "InsufficientRoots",
    "IoFailure",
    "LAPLACIAN_STEP_SCALE",
    "MoutardError",
    "NearPole",
    "NonConvergence",
    "NonFinite",
    "NonPositiveOmega",
    "RadiusTooSmall",
    "RootSet",
    "RootTrajectory",
    "ScatteringEstimate",
    "SmoothMoutardInput",
    "StencilConfig",
    "VERIFY_STENCIL",
    "ZeroLambda",
    "count_deltas",
    "d3_apply",
    "d_z",
    "d_zbar",
    "derivative",
    "differentiate",
    "evaluate",
    "evolve",
    "expected_a",
    "faddeev_psi",
    "fit_scattering",
    "from_roots",
    "gauge_shift",
    "harmonicity_check",
    "horner",
    "laplacian",
    "min_root_separation",
    "moutard_residual",
    "potential_at",
    "residual_sample_points",
    "roots",
    "sample_mu",
    "smooth_moutard_potential",
    "transformed_potential",
    "trajectory",
    "verify_eigenfunction_identity",
    "verify_flow",
]
