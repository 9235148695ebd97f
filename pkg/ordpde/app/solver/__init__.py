from .local_approx import (
    CalibratedPiece,
    CalibrationError,
    Certification,
    RefinementDemand,
    TilingCalibration,
    calibrate_tiling,
    certify,
    initial_piece,
    interior_piece,
)
from .assembly import (
    AssemblyError,
    InsufficientRefinementError,
    ResidualEvaluationError,
    ResidualReport,
    assemble,
    build_report,
    equivalent,
    regularized_partials,
    regularized_residual,
    trace,
)
from .convergence import (
    AEVerdict,
    ApproxSequence,
    CauchyDiagnostic,
    DecayRow,
    GridMismatchError,
    SequenceTerm,
    TermFailure,
    build_sequence,
    build_sequence_async,
    cauchy_diagnostic,
    check_ae_convergence,
    residual_ae_verdict,
    same_generalized_solution,
)

__all__ = [
    "CalibratedPiece",
    "CalibrationError",
    "Certification",
    "RefinementDemand",
    "TilingCalibration",
    "calibrate_tiling",
    "certify",
    "initial_piece",
    "interior_piece",
    "AssemblyError",
    "InsufficientRefinementError",
    "ResidualEvaluationError",
    "ResidualReport",
    "assemble",
    "build_report",
    "equivalent",
    "regularized_partials",
    "regularized_residual",
    "trace",
    "AEVerdict",
    "ApproxSequence",
    "CauchyDiagnostic",
    "DecayRow",
    "GridMismatchError",
    "SequenceTerm",
    "TermFailure",
    "build_sequence",
    "build_sequence_async",
    "cauchy_diagnostic",
    "check_ae_convergence",
    "residual_ae_verdict",
    "same_generalized_solution",
]
