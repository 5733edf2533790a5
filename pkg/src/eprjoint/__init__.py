"""Two-qubit EPR probabilities, Bell-CHSH checks in correlation and
probability form, and the complete family of joint quadruple distributions
reproducing three or four EPR experiments, cross-validated by an
independent linear-feasibility oracle."""

from .chsh import (
    ChshReport,
    CVariant,
    c_from_quadruple,
    c_function,
    chsh_correlation_form,
    chsh_probability_form,
    signed_correlation_combination,
)
from .construction import (
    ConstructionTrace,
    FamilyParams,
    Interval,
    QuadDistribution,
    SweepResult,
    TripleProbs,
    construct_3exp,
    construct_3exp_trace,
    construct_4exp,
    construct_4exp_trace,
    interval_p_a_plusplus,
    interval_p_aprime_bprime,
    interval_p_aprime_plusplus,
    interval_p_dotdot,
    interval_p_pp_bb,
    invert_params,
    marginal_residuals,
    step1_triples,
    step2_quadruple,
    sweep_grid,
)
from .errors import (
    ChshViolationError,
    EprJointError,
    InputInconsistencyError,
    InternalInvariantError,
    UsageError,
    ValidationError,
)
from .experiments import (
    CorrelationSet,
    ExperimentalProbs,
    PairOutcomeTable,
    correlations_of,
    expand_pair,
    frechet_bounds,
    outcome_tables,
    probs_from_correlations,
)
from .oracle import (
    FeasibilityResult,
    MarginalSystem,
    build_system,
    feasible,
    max_min_entry,
    solve_system,
)
from .quantum import (
    AnalyzerSettings,
    DensityMatrix,
    Observable,
    Particle,
    chsh_optimal_settings,
    correlation,
    double_prob,
    experimental_probs,
    ket00,
    ket_state,
    maximally_mixed,
    observable_matrix,
    single_prob,
    singlet,
    werner,
)

__version__ = "0.1.0"
