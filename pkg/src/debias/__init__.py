"""Bias-reduced sparse and low-rank recovery.

A combined flat-top plus l1 penalty on vector entries or singular values,
its exact proximal operators, ADMM solvers for dense measurement models
and orthographic structure-from-motion, and first-order certificates
(stationarity margins, oracle conditions, exact restricted-isometry
constants, stationary-point separation).
"""

from .errors import (
    CapacityError,
    DegenerateGeometryError,
    IngestionError,
    NumericError,
    ParameterError,
    ParseError,
)
from .numerics import (
    RegularizedLsCache,
    SvdFactors,
    as_matrix,
    as_vector,
    make_ls_cache,
    projection_complement,
    read_matrix,
    read_vector,
    solve_with_cache,
    svd,
    write_matrix,
    write_vector,
)
from .regularizer import (
    ArgminSet,
    RegParams,
    SubdiffInterval,
    prox_mat,
    prox_scalar,
    prox_vec,
    quadratic_envelope_grid,
    reg_value_mat,
    reg_value_scalar,
    reg_value_vec,
    separable_argmin_set,
    soft_threshold,
    subdiff_convexified,
)
from .solver import (
    AdmmResult,
    AdmmSettings,
    NrsfmProblem,
    OracleConditionReport,
    StationarityReport,
    VectorProblem,
    admm_matrix_nrsfm,
    admm_vector,
    count_differing,
    forbidden_band,
    least_squares_init,
    matrix_rank_of,
    numerical_rank,
    objective_vec,
    oracle_condition_check,
    oracle_solution,
    reshape_to_coords,
    reshape_to_modes,
    rip_delta_bruteforce,
    separation_check,
    stationarity_check,
    support_size,
)
from .experiments import (
    CsTrialConfig,
    NrsfmInstance,
    NrsfmMetrics,
    RegistrationFit,
    RegistrationInstance,
    TrialOutcome,
    apply_similarity,
    build_registration_problem,
    classify_outliers,
    gen_cs_instance,
    gen_nrsfm_instance,
    gen_registration_instance,
    inlier_fit,
    l1_weight,
    nrsfm_metrics,
    read_correspondences,
    read_mocap,
    recover_transform,
    register_correspondences,
    registration_oracle,
    run_cs_sweep,
    run_nrsfm_sweep,
    run_registration_sweep,
    sort_outcomes,
    write_correspondences,
    write_mocap,
)
from .cli import emit_results, read_results_json

__version__ = "0.1.0"
