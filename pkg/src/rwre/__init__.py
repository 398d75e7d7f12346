"""Random walks in i.i.d. random environments on the integers.

Simulation of quenched walks and their branch-chain representation,
beta-moment estimation of the environment density from one trajectory,
and data-driven smoothing-order selection.
"""

from .densities import (
    Beta,
    EnvDensity,
    SplitBeta,
    TriangleMix,
    TwoBump,
    Uniform,
    beta_kernel,
    density_from_spec,
    exact_beta_moment,
    piecewise_quadrature,
    quadrature_beta_moment,
    sample_by_rejection,
)
from .errors import (
    ConfigError,
    DataGenerationError,
    DegenerateDataError,
    NoFiniteKappaError,
    NumericsError,
    ParameterError,
    RegimeError,
    RwreError,
    StabilityError,
    TruncatedTrajectoryError,
)
from .estimator import (
    PiecewiseDensity,
    bias_bound,
    cdf_from_moments,
    density_from_cdf,
    estimate_beta_moment,
    estimate_density,
    oracle_density,
    transition_weight,
    visit_count,
)
from .experiment import (
    CHOSEN_SENTINEL,
    LOSS_HEADER,
    SUMMARY_HEADER,
    ExperimentConfig,
    ExperimentResult,
    LossRow,
    SummaryRow,
    chosen_median,
    derive_seed,
    loss_summary,
    run_experiment,
    write_loss_csv,
    write_summary_csv,
)
from .regime import (
    RECURRENT,
    TRANSIENT_LEFT,
    TRANSIENT_RIGHT_BALLISTIC,
    TRANSIENT_RIGHT_KAPPA_ONE,
    TRANSIENT_RIGHT_SUBBALLISTIC,
    RegimeReport,
    classify,
    log_rho_mean,
    rate_optimal_order,
    rho_moment,
    solve_kappa,
)
from .selection import (
    SelectionDiagnostics,
    comparison_term,
    default_grid,
    select_order,
    sup_norm_diff,
    variance_term,
)
from .simulate import (
    DEFAULT_MAX_STEPS,
    BranchSequence,
    LazyEnvironment,
    SiteCounts,
    annealed_kernel,
    counts_to_branch,
    run_walk_to_hit,
    sample_environment,
    simulate_bpire,
)

__all__ = [name for name in dir() if not name.startswith("_")]
