"""Randomized row/column selection for CUR approximation, with a
benchmark harness.

The public surface re-exported here is what the CLI and the test
suite build on; the submodules stay importable for anything narrower.
"""

from ._kernels import active_backend, kernel_set, numba_available, set_backend
from .cur import (
    CurFactors,
    build_cross_approximation,
    build_heuristic_cur,
    build_projection_cur,
    column_subset_error,
    cur_approximation,
    cur_error,
    row_subset_error,
)
from .errors import ConfigError, InvalidInput, IoError, NotOrthonormal, NumericalFailure
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    TrialRecord,
    load_config,
    parse_config_text,
    run_experiment,
    write_csv,
    write_svg,
)
from .linalg_core import (
    IndexSet,
    SvdResult,
    chebyshev_norm,
    coherence,
    frobenius_norm,
    orthonormal_range,
    pseudoinverse,
    sigma_min_block_bound,
    singular_values,
    spectral_norm,
    submatrix,
    svd,
)
from .matgen import (
    AssumptionInstance,
    AssumptionReport,
    AssumptionSpec,
    BoundReport,
    TailCheckReport,
    TheoryParams,
    exact_recovery_floor,
    gen_assumption_matrix,
    gen_bivariate,
    gen_block_example,
    gen_cross,
    gen_inverse_quadratic,
    iterative_row_bound,
    named_generator,
    perturbed_column_bound,
    perturbed_cur_bound,
    success_probability,
    tail_constant_lower,
    tail_constant_upper,
    uniform_sampling_tail_check,
    verify_assumption,
)
from .matio import load_matrix, save_matrix
from .selection import (
    Algorithm1Params,
    Algorithm2Params,
    SelectionStep,
    SelectionTrace,
    run_algorithm1,
    run_algorithm2,
    uniform_indices,
)
from .srrqr import SrrqrResult, srrqr, srrqr_select
from .suites import SuiteReport, run_property_suite

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "InvalidInput",
    "IoError",
    "NotOrthonormal",
    "NumericalFailure",
    "IndexSet",
    "SvdResult",
    "svd",
    "singular_values",
    "spectral_norm",
    "frobenius_norm",
    "chebyshev_norm",
    "pseudoinverse",
    "submatrix",
    "coherence",
    "orthonormal_range",
    "sigma_min_block_bound",
    "save_matrix",
    "load_matrix",
    "srrqr",
    "srrqr_select",
    "SrrqrResult",
    "uniform_indices",
    "Algorithm1Params",
    "Algorithm2Params",
    "SelectionStep",
    "SelectionTrace",
    "run_algorithm1",
    "run_algorithm2",
    "CurFactors",
    "build_projection_cur",
    "build_cross_approximation",
    "build_heuristic_cur",
    "cur_approximation",
    "cur_error",
    "column_subset_error",
    "row_subset_error",
    "gen_block_example",
    "gen_cross",
    "gen_bivariate",
    "gen_inverse_quadratic",
    "gen_assumption_matrix",
    "named_generator",
    "AssumptionSpec",
    "AssumptionInstance",
    "AssumptionReport",
    "verify_assumption",
    "TheoryParams",
    "BoundReport",
    "TailCheckReport",
    "tail_constant_lower",
    "tail_constant_upper",
    "success_probability",
    "exact_recovery_floor",
    "perturbed_column_bound",
    "perturbed_cur_bound",
    "iterative_row_bound",
    "uniform_sampling_tail_check",
    "ExperimentConfig",
    "ExperimentResult",
    "TrialRecord",
    "parse_config_text",
    "load_config",
    "run_experiment",
    "write_csv",
    "write_svg",
    "SuiteReport",
    "run_property_suite",
    "kernel_set",
    "active_backend",
    "set_backend",
    "numba_available",
    "__version__",
]
