"""Unit-circle rectified MVDR beamforming for uniform linear arrays."""

from .array_model import (
    SnapshotBatch,
    SourceSpec,
    UlaGeometry,
    UlaScenario,
    ensemble_covariance,
    generate_snapshots,
    steering_vector,
)
from .arraypoly import (
    ArrayPolynomial,
    DegenerateLeadingCoefficient,
    ZeroAtLookDirection,
    ZeroSet,
    beampattern,
    find_zeros,
    polynomial_to_weights,
    synthesize_from_zeros,
    weights_to_polynomial,
)
from .beamformers import DistortionlessViolation, WeightVector, cbf_weights, mvdr_weights
from .covariance import CovarianceMatrix, IllConditionedError, diagonal_load, hermitian_solve, sample_covariance
from .experiments import (
    EcdfCurve,
    ExperimentAborted,
    ExperimentConfig,
    ExperimentResult,
    TrialRecord,
    UnreachableTarget,
    ecdf,
    match_dl_to_wng,
    oracle_optimal_dl,
    run_experiment,
)
from .metrics import MetricsRecord, notch_depth, output_powers, output_sinr, white_noise_gain
from .rectify import ProjectionReport, project_zeros, uc_mvdr_weights

__version__ = "0.1.0"

__all__ = [
    "ArrayPolynomial",
    "CovarianceMatrix",
    "DegenerateLeadingCoefficient",
    "DistortionlessViolation",
    "EcdfCurve",
    "ExperimentAborted",
    "ExperimentConfig",
    "ExperimentResult",
    "IllConditionedError",
    "MetricsRecord",
    "ProjectionReport",
    "SnapshotBatch",
    "SourceSpec",
    "TrialRecord",
    "UlaGeometry",
    "UlaScenario",
    "UnreachableTarget",
    "WeightVector",
    "ZeroAtLookDirection",
    "ZeroSet",
    "beampattern",
    "cbf_weights",
    "diagonal_load",
    "ecdf",
    "ensemble_covariance",
    "find_zeros",
    "generate_snapshots",
    "hermitian_solve",
    "match_dl_to_wng",
    "mvdr_weights",
    "notch_depth",
    "oracle_optimal_dl",
    "output_powers",
    "output_sinr",
    "polynomial_to_weights",
    "project_zeros",
    "run_experiment",
    "sample_covariance",
    "steering_vector",
    "synthesize_from_zeros",
    "uc_mvdr_weights",
    "weights_to_polynomial",
    "white_noise_gain",
]
