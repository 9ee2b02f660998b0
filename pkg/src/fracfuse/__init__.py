"""Fractional-order differential data fusion and early warning.

Multi-sensor measurements of one quantity disagree because instruments
differ; this package models each sensor's mean against its dispersion,
sharpens the model through a fractional-difference operator, and rescales
the result so the fused readings agree with the reference true value.  A
prognosis layer fits the fused value over time and predicts when it will
cross a safety threshold.
"""

from .errors import (
    FracfuseError,
    FusionDidNotConverge,
    InputError,
    NoPrognosisError,
    NoValidDataError,
    NumericalError,
)
from .estimators import FractionalFusion, TrendPrognosis
from .fusion import (
    ConsistencyCheck,
    FusionConfig,
    FusionResult,
    QualityGate,
    SensorSeries,
    SensorSummary,
    check_consistency,
    fuse,
    improvement_ratio,
    reference_true_value,
    summarize,
)
from .glcalc import GLGrid, amplitude_curve, gl_differintegral, gl_weights, operator_gain
from .io import (
    Dataset,
    RunConfig,
    emit,
    fixture_path,
    load_dataset,
    load_run_config,
    load_trend,
    save_dataset,
)
from .lsqfit import FitReport, Polynomial, fit_poly, select_order
from .pipeline import run_pipeline, run_vehicle
from .prognosis import (
    ComponentPrognosis,
    Status,
    TrendModel,
    VehiclePrognosis,
    WarningPolicy,
    aggregate,
    component_prognosis,
    diagnose,
    fit_trend,
    threshold,
    warning_time,
)
from .synth import SynthSpec, generate

__version__ = "0.1.0"

__all__ = [
    "FracfuseError",
    "InputError",
    "NoValidDataError",
    "NumericalError",
    "FusionDidNotConverge",
    "NoPrognosisError",
    "GLGrid",
    "gl_weights",
    "gl_differintegral",
    "operator_gain",
    "amplitude_curve",
    "Polynomial",
    "FitReport",
    "fit_poly",
    "select_order",
    "QualityGate",
    "SensorSeries",
    "SensorSummary",
    "FusionConfig",
    "ConsistencyCheck",
    "FusionResult",
    "summarize",
    "check_consistency",
    "reference_true_value",
    "fuse",
    "improvement_ratio",
    "Status",
    "WarningPolicy",
    "TrendModel",
    "ComponentPrognosis",
    "VehiclePrognosis",
    "threshold",
    "diagnose",
    "fit_trend",
    "warning_time",
    "component_prognosis",
    "aggregate",
    "Dataset",
    "RunConfig",
    "load_dataset",
    "load_run_config",
    "load_trend",
    "save_dataset",
    "emit",
    "fixture_path",
    "run_pipeline",
    "run_vehicle",
    "SynthSpec",
    "generate",
    "FractionalFusion",
    "TrendPrognosis",
]
