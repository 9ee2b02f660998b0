"""Multi-sensor fusion pipeline built on the fractional-difference operator.

The stages mirror how the measurements are processed in practice: gate out
grossly invalid readings, summarize each sensor, model the dependence of
the per-sensor mean on its dispersion (the influence factor), push that
model through the fractional operator, and rescale the result back to the
physical measurement level so the mean matches the reference true value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import FusionDidNotConverge, InputError, NoValidDataError, NumericalError
from .glcalc import GLGrid, gl_differintegral
from .lsqfit import FitReport, select_order
from .validation import as_float_array, check_finite_scalar, check_fractional_order, require

__all__ = [
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
]


@dataclass(frozen=True)
class QualityGate:
    """Open admissibility interval for raw readings."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo = check_finite_scalar("gate lo", self.lo)
        hi = check_finite_scalar("gate hi", self.hi)
        require(lo < hi, f"gate requires lo < hi, got ({lo}, {hi})")

    def admits(self, value: float) -> bool:
        return self.lo < value < self.hi


@dataclass(frozen=True, eq=False)
class SensorSeries:
    """Repeated raw readings from one sensor."""

    sensor_id: str
    readings: np.ndarray
    unit: str = ""

    def __post_init__(self) -> None:
        arr = as_float_array(f"readings of {self.sensor_id}", self.readings)
        require(arr.size > 0, f"sensor {self.sensor_id} has no readings")
        object.__setattr__(self, "readings", arr)


@dataclass(frozen=True)
class SensorSummary:
    """Gate-surviving statistics for one sensor (population std, divisor n)."""

    sensor_id: str
    retained: int
    mean: float
    std: float

    def __post_init__(self) -> None:
        require(self.retained >= 1, f"sensor {self.sensor_id}: retained must be >= 1")
        require(self.std >= 0.0, f"sensor {self.sensor_id}: std must be >= 0")


@dataclass(frozen=True)
class FusionConfig:
    """Parameters of the fusion stage.

    ``nu`` is restricted to [0, 1]: order 0 leaves values unchanged and
    order 1 is the plain first difference, so the useful fractional range
    sits strictly between them.  ``consistency_tol`` bounds the relative
    spread of the rescaled values; if a round exceeds it, the fit/fuse
    stage re-enters with the rescaled values as new means, up to
    ``max_rounds``.
    """

    nu: float = 0.5
    h: float = 0.01
    consistency_tol: float = 0.05
    max_rounds: int = 3

    def __post_init__(self) -> None:
        check_fractional_order(self.nu, upper=1.0)
        h = check_finite_scalar("step h", self.h)
        require(h > 0.0, f"step h must be > 0, got {h}")
        tol = check_finite_scalar("consistency_tol", self.consistency_tol)
        require(tol > 0.0, f"consistency_tol must be > 0, got {tol}")
        require(self.max_rounds >= 1, f"max_rounds must be >= 1, got {self.max_rounds}")


@dataclass(frozen=True)
class ConsistencyCheck:
    passed: bool
    max_rel_deviation: float
    tol: float


@dataclass(eq=False)
class FusionResult:
    """Fused (operator-scale) and rescaled (physical-scale) values.

    ``K`` is the amplification ratio mean(fused)/reference; dividing every
    fused value by it puts the mean of ``rescaled`` exactly on the
    reference true value.
    """

    sensor_ids: tuple[str, ...]
    fused: np.ndarray
    rescaled: np.ndarray
    K: float
    reference: float
    pre_std: float
    post_std: float
    rounds: int
    fit: FitReport = field(repr=False)
    grid: GLGrid = field(repr=False)


def _population_std(values: np.ndarray) -> float:
    return float(np.sqrt(np.mean((values - values.mean()) ** 2)))


def summarize(series: SensorSeries, gate: QualityGate) -> SensorSummary:
    """Discard readings outside the gate and compute mean and population std."""
    kept = series.readings[(series.readings > gate.lo) & (series.readings < gate.hi)]
    if kept.size == 0:
        raise NoValidDataError(
            f"sensor {series.sensor_id}: no reading passed the quality gate "
            f"({gate.lo}, {gate.hi})"
        )
    return SensorSummary(
        sensor_id=series.sensor_id,
        retained=int(kept.size),
        mean=float(kept.mean()),
        std=_population_std(kept),
    )


def check_consistency(summaries: Sequence[SensorSummary], tol: float) -> ConsistencyCheck:
    """Compare per-sensor means against their grand mean, relatively."""
    require(len(summaries) > 0, "check_consistency needs at least one summary")
    tol = check_finite_scalar("tol", tol)
    means = np.array([s.mean for s in summaries])
    grand = float(means.mean())
    if grand == 0.0:
        raise NumericalError("grand mean is zero; relative deviation is undefined")
    deviation = float(np.max(np.abs(means - grand)) / abs(grand))
    return ConsistencyCheck(passed=deviation <= tol, max_rel_deviation=deviation, tol=tol)


def reference_true_value(summaries: Sequence[SensorSummary]) -> float:
    """Unweighted mean of the per-sensor means, used as the measurand estimate."""
    require(len(summaries) > 0, "reference_true_value needs at least one summary")
    return float(np.mean([s.mean for s in summaries]))


def fuse(summaries: Sequence[SensorSummary], config: FusionConfig) -> FusionResult:
    """Run the influence-factor fit and fractional fusion on sensor summaries.

    Each sensor's influence factor is its own measurement std.  The fitted
    mean-vs-std polynomial is evaluated through the fractional operator at
    every sensor's influence factor on a grid spanning the observed std
    range; the polynomial is extrapolated below the range where the
    truncated sum reaches past it.
    """
    require(len(summaries) >= 3, f"fusion needs >= 3 sensors, got {len(summaries)}")
    ids = tuple(s.sensor_id for s in summaries)
    influence = np.array([s.std for s in summaries])
    means0 = np.array([s.mean for s in summaries])
    require(
        float(influence.max() - influence.min()) > 0.0,
        "influence factors have zero spread; the mean-vs-std fit is degenerate",
    )

    reference = reference_true_value(summaries)
    if reference == 0.0:
        raise NumericalError("reference true value is zero; rescaling is undefined")
    pre_std = _population_std(means0)
    grid = GLGrid(float(influence.min()), float(influence.max()), config.h)

    means = means0
    result = None
    for round_no in range(1, config.max_rounds + 1):
        fit = select_order(np.column_stack([influence, means]), max_order=len(ids) - 1)
        fused = np.empty(len(ids))
        for i, s in enumerate(influence):
            fused[i] = gl_differintegral(fit.poly, float(s), grid, config.nu)
            if not math.isfinite(fused[i]):
                raise NumericalError(f"sensor {ids[i]}: fused value is not finite")
        K = float(fused.mean()) / reference
        if not math.isfinite(K) or K <= 0.0:
            raise NumericalError(f"amplification ratio K={K!r} is not positive")
        rescaled = fused / K
        result = FusionResult(
            sensor_ids=ids,
            fused=fused,
            rescaled=rescaled,
            K=K,
            reference=reference,
            pre_std=pre_std,
            post_std=_population_std(rescaled),
            rounds=round_no,
            fit=fit,
            grid=grid,
        )
        spread = float(np.max(np.abs(rescaled - rescaled.mean())) / abs(rescaled.mean()))
        if spread <= config.consistency_tol:
            return result
        means = rescaled

    raise FusionDidNotConverge(
        f"rescaled spread still exceeds {config.consistency_tol} "
        f"after {config.max_rounds} rounds",
        result=result,
    )


def improvement_ratio(result: FusionResult) -> float:
    """Dispersion improvement pre/post fusion; infinite when post_std is zero."""
    if result.post_std == 0.0:
        return math.inf
    return result.pre_std / result.post_std
