"""Median-of-means and competitor mean estimators under adversarial
contamination: seeded Monte Carlo harness, bound evaluators, and checks."""

__version__ = "0.1.0"

from .contamination import (
    AttackKind,
    AttackSpec,
    ContaminationReport,
    apply_attack,
    verify_contamination,
)
from .distributions import (
    ClassTag,
    DistributionSpec,
    Gaussian,
    GeneralizedPareto,
    HalfNormal,
    Moments,
    NegativeExponential,
    PointMass,
    StudentT,
    block_mean_quantile_analytic,
    draw_quantile,
    moments,
    sample,
)
from .errors import (
    ConfigError,
    HypothesisError,
    MomlabError,
    NumericError,
    ParameterError,
)
from .estimators import (
    CatoniEstimator,
    EstimatorSpec,
    MedianOfMeans,
    SampleMean,
    SampleMedian,
    TrimmedMean,
    catoni,
    median_of_means,
    sample_mean,
    sample_median,
    trimmed_mean,
)
from .harness import (
    DEFAULT_MASTER_SEED,
    ErrorQuantileRecord,
    ExperimentPlan,
    SlopeFit,
    figure_preset,
    fit_slope,
    log_grid,
    run_replication,
    run_sweep,
)
from .quantlab import (
    QuantileCurve,
    contaminated_block_count,
    empirical_block_mean_quantile,
    normal_approx_gap,
    order_statistic,
    order_statistic_coverage,
    quantile_curve,
    symmetric_class_check,
)
from .theory import (
    BlockRule,
    BoundValue,
    FractionBlocks,
    HeavyTailBlocks,
    PowerLawBlocks,
    asymptotic_bias_order,
    bound_finite_variance,
    bound_general_quantile,
    bound_infinite_variance,
    finite_variance_constant,
    resolve_blocks,
)
