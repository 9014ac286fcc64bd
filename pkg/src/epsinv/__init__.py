"""Transfer operators of piecewise-monotone interval maps, series solvers for
``phi = P phi + g`` and epsilon-invariant measures."""

from .attractor import (
    AttractorTrace,
    affine_gap_condition,
    attractor_iterate,
    measure_zero_verdict,
    norm_decay_check,
)
from .branches import (
    AffineBranch,
    BranchSystem,
    Flags,
    GeneralBranch,
    Transformation,
    build_full_affine,
    s_apply,
    s_preimage,
    validate,
)
from .errors import (
    CapExceeded,
    DomainError,
    EpsInvError,
    HypothesisViolated,
    InvalidInput,
    InvalidSystem,
    NonFiniteSample,
    RangeError,
)
from .intervals import Interval, IntervalSet, affine_image, complement, intersect, measure, union
from .measures import (
    CylinderMeasure,
    DensityMeasure,
    build_g_orthogonal,
    build_g_piecewise,
    check_density_criterion,
    check_set_criterion,
    convex_mix_measure,
    cylinder_interval,
    density_equivalent,
    nu0,
    nu_on_intervalset,
)
from .operators import (
    OperatorHandle,
    adjoint_check,
    fp_apply,
    fp_apply_general,
    fp_operator,
    iterate,
    markov_check,
)
from .solvers import (
    SolveOptions,
    SolveResult,
    check_zero_integral,
    closed_form_affine,
    residual,
    solve,
    solve_cesaro,
    solve_neumann,
)
from .stepfun import CoarsenPolicy, StepFunction, linear_combination

__version__ = "0.1.0"
