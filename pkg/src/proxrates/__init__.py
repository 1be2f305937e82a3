"""Exact worst-case convergence rates of the proximal gradient method.

The package has four layers:

* `rates`: the contraction factor, the optimal step size, and the full table
  of (initial measure, final measure) convergence guarantees with provenance;
* `prox` / `smooth` / `engine`: closed-form catalog oracles and the
  instrumented proximal gradient method (fixed step and exact line search);
* `worstcase` / `measures`: generators of rate-attaining instances and the
  strong-convexity conversion checks between performance measures;
* `certificate`: exact rational verification of the proof certificates
  behind the per-iteration contraction theorems.
"""

from .certificate import (
    CertificateReport,
    Regime,
    default_grid,
    gamma_symbol,
    interp_convex,
    interp_smooth,
    numeric_spot_check,
    verify_distance,
    verify_funcvalue,
    verify_residual,
)
from .engine import (
    IterateRecord,
    IterateTrace,
    LineSearchError,
    exact_line_search_step,
    pgm_step,
    residual_line_search_step,
    run,
    run_exact_line_search,
)
from .measures import MeasureTriple, check_mixed_bound, check_proposition
from .prox import BoxIndicator, L1Norm, LinearPlusNonnegIndicator, NonnegIndicator, ProxFunction, Zero
from .rates import (
    BoundValue,
    ClassParams,
    MeasureKind,
    Provenance,
    Rate,
    bound_lookup,
    classical_nontight_bound,
    contraction,
    optimal_step,
)
from .smooth import (
    CompositeProblem,
    DenseQuadratic,
    DiagonalQuadratic,
    ScaledSqNorm,
    SmoothFunction,
    check_interpolation,
    random_composite,
    random_instance,
)
from .worstcase import (
    WorstCaseSpec,
    mixed_measure_instance,
    els_worst_quadratic,
    quadratic_lower_bound,
    unbounded_family,
)

__version__ = "0.1.0"

__all__ = [
    "BoundValue",
    "BoxIndicator",
    "CertificateReport",
    "ClassParams",
    "CompositeProblem",
    "DenseQuadratic",
    "DiagonalQuadratic",
    "IterateRecord",
    "IterateTrace",
    "L1Norm",
    "LineSearchError",
    "LinearPlusNonnegIndicator",
    "MeasureKind",
    "MeasureTriple",
    "NonnegIndicator",
    "Provenance",
    "ProxFunction",
    "Rate",
    "Regime",
    "ScaledSqNorm",
    "SmoothFunction",
    "WorstCaseSpec",
    "Zero",
    "mixed_measure_instance",
    "bound_lookup",
    "check_interpolation",
    "check_mixed_bound",
    "check_proposition",
    "classical_nontight_bound",
    "contraction",
    "default_grid",
    "els_worst_quadratic",
    "exact_line_search_step",
    "gamma_symbol",
    "interp_convex",
    "interp_smooth",
    "numeric_spot_check",
    "optimal_step",
    "pgm_step",
    "quadratic_lower_bound",
    "random_composite",
    "random_instance",
    "residual_line_search_step",
    "run",
    "run_exact_line_search",
    "unbounded_family",
    "verify_distance",
    "verify_funcvalue",
    "verify_residual",
]
