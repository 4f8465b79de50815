"""HL(0) planar aggregation: simulation and fluctuation-field verification.

Clusters grow by composing rotated copies of an explicit exterior conformal
map; the log-map fluctuations around exponential scaling are Gaussian in the
small-particle limit, with closed-form covariances, and the limit field has
an exact spectral simulation through Ornstein-Uhlenbeck Fourier modes.  This
package implements the grower, the observables, the closed forms, the
spectral simulator, and the Monte Carlo machinery that checks they agree.
"""

from .cluster import (
    ClusterState,
    GoodEventParams,
    GoodEventReport,
    GrowthConfig,
    PointInsideClusterError,
    Regime,
    cluster_map,
    default_sample_points,
    good_event_check,
    grow,
    inverse_cluster_map,
    log_cluster_map,
    trace_boundary,
)
from .conformal import (
    BranchSelectionError,
    DistortionReport,
    DomainError,
    ParticleParams,
    SingularityError,
    delta_from_capacity,
    distortion_report,
    inverse_particle_map,
    log_increment,
    make_particle,
    particle_map,
    rotated_particle_map,
)
from .fluctuation import (
    ConditionalMomentDiagnostic,
    FluctuationSample,
    IncrementSweep,
    MartingaleIncrements,
    conditional_moment_diagnostic,
    fluctuation_field,
    increment_sweep,
    increments,
)
from .limitfield import (
    BoundaryCoefficients,
    FieldValue,
    OUState,
    boundary_coefficients,
    default_mode_count,
    evaluate_field,
    ou_init,
    ou_step,
    poisson_extension,
    simulate_field_ensemble,
    stationary_field,
    transition_residuals,
)
from .stats import (
    ComparisonResult,
    EnsembleResult,
    EnsembleSpec,
    LocalExperimentReport,
    MomentReport,
    NormalityReport,
    compare_to_theory,
    estimate_moments,
    local_experiment,
    normality_diagnostics,
    run_ensemble,
)
from .theory import (
    CovarianceSpec,
    conjugate_kernel,
    covariance_cross,
    covariance_same,
    fgf_mode_variance,
    fluctuation_variance,
    local_correlation,
    poisson_kernel,
    variance_partial_sum,
    variance_series_tail_bound,
)

__version__ = "0.1.0"
