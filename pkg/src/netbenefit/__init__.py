"""Clinical utility of risk-prediction scores: decision curves, binary and
continuous net benefit, threshold weightings, brute-force utility oracles,
and bootstrap inference."""

__version__ = "0.1.0"

from netbenefit.binary import (
    DecisionCurveTable,
    combine_decisions,
    decision_curve,
    default_grid,
    net_benefit,
    rescaled_net_benefit,
    treat_all_net_benefit,
)
from netbenefit.bootstrap import (
    BootstrapConfig,
    BootstrapResult,
    OptimismResult,
    Statistic,
    bootstrap_ci,
    cnb_difference_statistic,
    cnb_statistic,
    nb_statistic,
    optimism_correct,
    percentile_interval,
    prevalence_statistic,
)
from netbenefit.confusion import ClassificationCurve, confusion_at, sweep
from netbenefit.continuous import (
    CnbEstimate,
    ConfidenceInterval,
    aunb,
    aunb_alt,
    brier,
    cnb_difference,
    continuous_net_benefit,
    expected_net_benefit,
    log_likelihood,
    subject_contributions,
    treat_all_cnb,
)
from netbenefit.dataset import (
    ColumnSchema,
    DatasetSummary,
    EvaluationDataset,
    load_csv,
    save_csv,
    summarize,
)
from netbenefit.errors import (
    DivergentIntegralError,
    FitError,
    NetBenefitError,
    NoDensityError,
    NumericError,
    ValidationError,
)
from netbenefit.logistic import LogisticModel, expit, fit_logistic, predict
from netbenefit.oracle import (
    DisagreementWitness,
    FixedThresholds,
    GeneratorConfig,
    OracleReport,
    TruncatedNormalThresholds,
    UniformThresholds,
    UtilityPopulation,
    WitnessSearchConfig,
    aunb_disagreement_witness,
    brute_force_utility,
    expected_net_benefit_discrete,
    generate_population,
    two_group_scenario,
    verify_expected_nb,
)
from netbenefit.quadrature import QuadConfig
from netbenefit.weighting import (
    AVERAGED_TRUE_POSITIVES,
    COMBINED_TRUE_POSITIVES,
    UNNORMALIZED,
    ConstantFpHarmWeight,
    ConstantTpBenefitWeight,
    CumulativeWeights,
    HarmonicUtilityWeight,
    LogNormalDensity,
    MixtureWeight,
    ParabolaWeight,
    PointMassWeight,
    TabulatedCurve,
    TabulatedWeight,
    TruncatedGaussianWeight,
    UniformWeight,
    WeightSpec,
    as_curve,
    cumulative,
    example_weights,
    harmonic_weight,
    normalize,
    spec_from_dict,
    total_mass,
    weight_value,
)
