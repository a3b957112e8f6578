"""Exact simulation of mirror-complement memory cloning and associative retrieval."""

from .errors import (
    CloningError,
    DimensionError,
    InfeasibleCloningError,
    PatternParseError,
    SingularOverlapError,
    ZeroMassError,
)
from .memory import (
    CloneResult,
    CloningSolution,
    GramCheck,
    apply_clone,
    build_memory_state,
    build_mirror_state,
    gram_condition_check,
    gram_matrices,
    gram_residual,
    memory_overlap,
    solve_efficiencies,
)
from .patterns import (
    BitPattern,
    PatternSet,
    hamming_distance,
    mirror,
    mirror_set,
    parse_pattern_file,
    random_pattern_set,
)
from .retrieval import (
    AmplificationMode,
    AnalyticDistribution,
    DistributionReport,
    GammaMode,
    RetrievalConfig,
    RetrievalOutcome,
    RetrievalRun,
    amplified_success_probability,
    amplitude_amplify,
    analytic_distribution,
    apply_control_rotations,
    apply_difference_encoding,
    complexity_estimate,
    complexity_uniform_approx,
    cos_power_average,
    good_subspace_probability,
    grover_baseline,
    optimal_iterations,
    prepare_initial,
    resolve_gamma,
    retrieve,
    run_pipeline,
    run_retrieval,
    simulate_distribution,
    undo_difference_encoding,
)
from .statevector import (
    Register,
    RegisterLayout,
    StateVector,
    apply_hadamard,
    apply_hamming_phase,
    apply_not,
    apply_xor,
    collapse_qubit,
    inner_product,
    measure_qubit,
    measure_register,
    probability_of_subspace,
    reflect_about_state,
    reflect_good_subspace,
)

__version__ = "0.1.0"
