"""Fault diagnosis and early warning: thresholds, trends, time-to-threshold."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InputError, NoPrognosisError
from .lsqfit import FitReport, Polynomial, select_order
from .validation import check_finite_scalar, require

__all__ = [
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
]

DEFAULT_HORIZON_MONTHS = 240.0

# Scan resolution (months) used to bracket crossings of trends above
# quadratic order before bisection refines them.
_SCAN_STEP = 1e-3


class Status(str, Enum):
    NORMAL = "normal"
    WARNING = "warning"


@dataclass(frozen=True)
class WarningPolicy:
    """Rated limit of the monitored quantity and the safety coefficient.

    The coefficient is strictly inside (0, 1): the warning threshold must
    sit below the rated limit, and a zero threshold is meaningless.
    """

    rated_limit: float
    k: float

    def __post_init__(self) -> None:
        limit = check_finite_scalar("rated_limit", self.rated_limit)
        k = check_finite_scalar("safety coefficient k", self.k)
        require(limit > 0.0, f"rated_limit must be > 0, got {limit}")
        require(0.0 < k < 1.0, f"safety coefficient k must be in (0, 1), got {k}")


def threshold(policy: WarningPolicy) -> float:
    """Early-warning threshold ``k * rated_limit``."""
    return policy.k * policy.rated_limit


def diagnose(current: float, thr: float) -> Status:
    """Warning as soon as the current value reaches the threshold."""
    current = check_finite_scalar("current value", current)
    thr = check_finite_scalar("threshold", thr)
    return Status.WARNING if current >= thr else Status.NORMAL


@dataclass(frozen=True)
class TrendModel:
    """Polynomial trend of the monitored value over time (months)."""

    poly: Polynomial
    t_last: float
    fit: FitReport


def fit_trend(samples: Sequence[tuple[float, float]] | np.ndarray) -> TrendModel:
    """Fit a time trend to ``(t, value)`` samples with automatic order choice.

    Times must be strictly increasing; the sampling cadence is otherwise
    arbitrary.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"trend samples must be (t, value) pairs, got shape {arr.shape}")
    require(arr.shape[0] >= 2, "trend fitting needs at least 2 samples")
    t = arr[:, 0]
    if not np.all(np.diff(t) > 0):
        raise InputError("trend sample times must be strictly increasing")
    report = select_order(arr, max_order=arr.shape[0] - 1)
    return TrendModel(poly=report.poly, t_last=float(t[-1]), fit=report)


def _real_roots_leq2(coeffs: np.ndarray) -> list[float]:
    """Real roots of a polynomial of effective degree <= 2, closed form."""
    c = np.trim_zeros(coeffs, trim="b")
    if c.size == 0:
        return []  # identically zero handled by caller
    if c.size == 1:
        return []
    if c.size == 2:
        b, a = c[0], c[1]
        return [-b / a]
    c0, c1, c2 = c
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    # Stable quadratic formula: avoid cancellation between -c1 and sq.
    q = -0.5 * (c1 + math.copysign(sq, c1)) if c1 != 0.0 else 0.5 * sq
    roots = []
    if q != 0.0:
        roots.extend([q / c2, c0 / q])
    else:
        roots.extend([0.0, -c1 / c2])
    return roots


def warning_time(
    trend: TrendModel,
    thr: float,
    horizon: float = DEFAULT_HORIZON_MONTHS,
) -> float | None:
    """Smallest ``t >= t_last`` (and <= horizon) where the trend reaches ``thr``.

    Closed form for trends up to quadratic order, bracketed bisection to
    1e-9 above that.  ``None`` means no crossing inside the horizon; a
    prediction never precedes the last observation.
    """
    thr = check_finite_scalar("threshold", thr)
    horizon = check_finite_scalar("horizon", horizon)
    require(horizon >= trend.t_last, "horizon must not precede the last observation")
    shifted = np.asarray(trend.poly.coeffs, dtype=float).copy()
    shifted[0] -= thr

    if float(trend.poly(trend.t_last)) >= thr:
        return trend.t_last

    effective = np.trim_zeros(shifted, trim="b")
    if effective.size <= 3:
        candidates = [
            float(r) for r in _real_roots_leq2(shifted) if trend.t_last <= r <= horizon
        ]
        return min(candidates) if candidates else None

    # Bracket the first sign change on a dense grid, then bisect.
    n = int(math.ceil((horizon - trend.t_last) / _SCAN_STEP)) + 1
    ts = np.linspace(trend.t_last, horizon, n)
    gs = trend.poly(ts) - thr
    above = np.flatnonzero(gs >= 0.0)
    if above.size == 0:
        return None
    j = int(above[0])
    if j == 0:
        return float(ts[0])
    lo, hi = float(ts[j - 1]), float(ts[j])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(trend.poly(mid)) - thr >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-9:
            break
    return hi


@dataclass(frozen=True)
class ComponentPrognosis:
    """Diagnosis of one component plus its predicted threshold crossing."""

    component: str
    status: Status
    current_value: float
    threshold: float
    t_y: float | None = None


@dataclass(frozen=True)
class VehiclePrognosis:
    """Min-rule verdict: the earliest component crossing names the source."""

    components: tuple[ComponentPrognosis, ...]
    t_min: float
    source: str


def component_prognosis(
    component: str,
    current_value: float,
    policy: WarningPolicy,
    trend: TrendModel | None = None,
    horizon: float = DEFAULT_HORIZON_MONTHS,
) -> ComponentPrognosis:
    """Combine diagnosis and, for normal components, the crossing prediction."""
    thr = threshold(policy)
    status = diagnose(current_value, thr)
    t_y = None
    if status is Status.NORMAL and trend is not None:
        t_y = warning_time(trend, thr, horizon=horizon)
    return ComponentPrognosis(
        component=component,
        status=status,
        current_value=float(current_value),
        threshold=thr,
        t_y=t_y,
    )


def aggregate(components: Sequence[ComponentPrognosis]) -> VehiclePrognosis:
    """Fold component prognoses into the whole-system verdict.

    A component already in warning makes the system warn now (t_min = 0);
    otherwise the smallest predicted crossing wins.  Ties go to the first
    component in the given order.
    """
    require(len(components) > 0, "aggregate needs at least one component")
    comps = tuple(components)
    for c in comps:
        if c.status is Status.WARNING:
            return VehiclePrognosis(components=comps, t_min=0.0, source=c.component)
    timed = [c for c in comps if c.t_y is not None]
    if not timed:
        raise NoPrognosisError(
            "no component is in warning and none has a predicted crossing"
        )
    t_min = min(c.t_y for c in timed)
    source = next(c.component for c in timed if c.t_y == t_min)
    return VehiclePrognosis(components=comps, t_min=float(t_min), source=source)
