"""Scikit-learn style estimators wrapping the fusion and trend layers.

These make the two learnable stages compose with sklearn pipelines and
model-selection tooling: ``FractionalFusion`` is a transformer over a
readings matrix (one row per sensor) and ``TrendPrognosis`` a regressor
over time.  Parameter handling follows the sklearn contract (constructor
arguments stored untouched, fitted state in trailing-underscore
attributes), so ``get_params``/``set_params``/``clone`` work as usual.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin

from .errors import InputError
from .fusion import FusionConfig, QualityGate, SensorSeries, fuse, summarize
from .glcalc import gl_differintegral
from .prognosis import fit_trend, warning_time
from .validation import require

__all__ = ["FractionalFusion", "TrendPrognosis"]


def _as_matrix(X) -> np.ndarray:
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2:
        raise InputError(f"X must be 2-D (n_sensors, n_readings), got shape {arr.shape}")
    require(arr.shape[0] >= 1, "X needs at least one row")
    require(arr.shape[1] >= 1, "X needs at least one reading per row")
    if not np.all(np.isfinite(arr)):
        raise InputError("X contains non-finite readings")
    return arr


class FractionalFusion(BaseEstimator, TransformerMixin):
    """Fuse per-sensor repeated readings into rescaled per-sensor values.

    ``fit`` learns the mean-vs-dispersion model, the operator grid, and the
    amplification ratio from the training readings; ``transform`` maps a
    readings matrix to one rescaled value per row by evaluating the fitted
    fusion at each row's dispersion.  Row dispersions outside the fitted
    grid are rejected rather than extrapolated.

    Parameters
    ----------
    nu : fractional order in [0, 1]
    h : operator grid step
    gate : optional (lo, hi) open interval for gross-outlier rejection
    consistency_tol : relative spread allowed after rescaling
    max_rounds : refit/fuse rounds before giving up
    """

    def __init__(self, nu=0.5, h=0.01, gate=None, consistency_tol=0.05, max_rounds=3):
        self.nu = nu
        self.h = h
        self.gate = gate
        self.consistency_tol = consistency_tol
        self.max_rounds = max_rounds

    def _gate(self) -> QualityGate:
        if self.gate is None:
            return QualityGate(-np.inf, np.inf)
        lo, hi = self.gate
        return QualityGate(lo, hi)

    def _summaries(self, X: np.ndarray):
        gate = self._gate()
        return [
            summarize(SensorSeries(sensor_id=f"s{i}", readings=row), gate)
            for i, row in enumerate(X)
        ]

    def fit(self, X, y=None):
        X = _as_matrix(X)
        summaries = self._summaries(X)
        config = FusionConfig(
            nu=self.nu,
            h=self.h,
            consistency_tol=self.consistency_tol,
            max_rounds=self.max_rounds,
        )
        self.result_ = fuse(summaries, config)
        self.summaries_ = summaries
        self.poly_ = self.result_.fit.poly
        self.grid_ = self.result_.grid
        self.K_ = self.result_.K
        self.reference_ = self.result_.reference
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        if not hasattr(self, "result_"):
            raise InputError("FractionalFusion must be fitted before transform")
        X = _as_matrix(X)
        summaries = self._summaries(X)
        out = np.empty(len(summaries))
        for i, summary in enumerate(summaries):
            fused = gl_differintegral(self.poly_, summary.std, self.grid_, self.nu)
            out[i] = fused / self.K_
        return out.reshape(-1, 1)


class TrendPrognosis(BaseEstimator, RegressorMixin):
    """Polynomial trend regressor with a time-to-threshold query.

    ``fit`` selects the trend order from the data; when ``rated_limit`` is
    set, the fitted estimator also exposes ``threshold_`` and
    ``warning_time_`` (the first time the trend reaches the threshold, or
    ``None``).
    """

    def __init__(self, rated_limit=None, k=0.98, horizon=240.0):
        self.rated_limit = rated_limit
        self.k = k
        self.horizon = horizon

    @staticmethod
    def _times(X) -> np.ndarray:
        arr = np.asarray(X, dtype=float)
        if arr.ndim == 2:
            if arr.shape[1] != 1:
                raise InputError(f"X must be a single time column, got shape {arr.shape}")
            arr = arr[:, 0]
        elif arr.ndim != 1:
            raise InputError(f"X must be 1-D times or a column, got shape {arr.shape}")
        return arr

    def fit(self, X, y):
        t = self._times(X)
        values = np.asarray(y, dtype=float)
        require(t.shape == values.shape, "X and y must have matching lengths")
        self.trend_ = fit_trend(np.column_stack([t, values]))
        self.n_features_in_ = 1
        if self.rated_limit is not None:
            self.threshold_ = self.k * self.rated_limit
            self.warning_time_ = warning_time(
                self.trend_, self.threshold_, horizon=self.horizon
            )
        else:
            self.threshold_ = None
            self.warning_time_ = None
        return self

    def predict(self, X):
        if not hasattr(self, "trend_"):
            raise InputError("TrendPrognosis must be fitted before predict")
        return np.asarray(self.trend_.poly(self._times(X)), dtype=float)
