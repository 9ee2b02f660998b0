"""Least-squares polynomial fitting with automatic order selection.

``fit_poly`` solves the least-squares problem for a fixed order through an
orthogonal (SVD) factorization of the design matrix rather than by forming
and inverting the normal equations, so the result stays accurate on poorly
conditioned inputs while still matching a brute-force normal-equations
solve on well-conditioned ones.

``select_order`` grows the order one step at a time and keeps a higher
order only while the added term is statistically justified: the candidate
term must pass a partial F-test at the 1% level.  Raw training error is
nonincreasing in the order by construction, so minimizing it would always
drift toward the interpolating polynomial; the significance gate is what
provides the stopping rule.  Monitored-equipment trend data is typically
short (five to ten points), where this matters most.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import stats

from .errors import InputError, NumericalError
from .validation import require

__all__ = ["Polynomial", "FitReport", "fit_poly", "select_order"]

# Significance level for the stepwise partial F-test.
STEPWISE_ALPHA = 0.01

# Sum of squares below this floor (scaled by the data magnitude) is treated
# as an exact fit; comparing noise-level residuals produces meaningless
# F-ratios.
_EXACT_FIT_FLOOR = 1e-12


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with coefficients in ascending powers."""

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        require(len(self.coeffs) >= 1, "polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return npoly.polyval(x, np.asarray(self.coeffs))

    def derivative(self) -> "Polynomial":
        if self.order == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(npoly.polyder(np.asarray(self.coeffs))))


@dataclass(frozen=True)
class FitReport:
    """Outcome of an order scan: chosen polynomial plus its error metrics.

    ``total_abs_error`` is the sum of absolute residuals at the fitted
    points and ``sse`` the sum of squared residuals; both are reported so
    callers can compare against externally published error figures, which
    in practice are quoted as sums of squares.
    """

    poly: Polynomial
    total_abs_error: float
    sse: float
    order_scanned: range
    scanned_sse: tuple[tuple[int, float], ...] = ()

    @property
    def order(self) -> int:
        return self.poly.order


def _split_points(points) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(
            f"points must be a sequence of (x, y) pairs, got shape {arr.shape}"
        )
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError("points contain non-finite coordinates")
    return arr[:, 0], arr[:, 1]


def fit_poly(points: Sequence[tuple[float, float]] | np.ndarray, order: int) -> Polynomial:
    """Least-squares polynomial of the given order through ``points``.

    Raises if ``order >= len(points)`` or if the design matrix is rank
    deficient (all x identical, or an order too high for the number of
    distinct x values).  Duplicate x values are otherwise fine.
    """
    x, y = _split_points(points)
    require(x.size > 0, "points must be nonempty")
    if not isinstance(order, (int, np.integer)) or isinstance(order, bool):
        raise InputError(f"order must be an integer, got {order!r}")
    require(order >= 0, f"order must be >= 0, got {order}")
    require(
        order < x.size,
        f"order {order} needs at least {order + 1} points, got {x.size}",
    )
    design = npoly.polyvander(x, order)
    coeffs, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < order + 1:
        raise NumericalError(
            f"design matrix is rank-deficient for order {order} "
            f"({x.size} points, {len(set(x.tolist()))} distinct x values)"
        )
    return Polynomial(tuple(coeffs))


def _errors(poly: Polynomial, x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    residuals = poly(x) - y
    return float(np.abs(residuals).sum()), float(residuals @ residuals)


def select_order(
    points: Sequence[tuple[float, float]] | np.ndarray,
    max_order: int,
    *,
    significance: float = STEPWISE_ALPHA,
) -> FitReport:
    """Scan orders ``1..max_order`` and return the selected fit.

    Starting from the line, each next order is adopted only if its term
    survives a partial F-test at the ``significance`` level and at least
    one residual degree of freedom remains; an order whose fit fails
    (rank deficiency) ends the scan.  The scan also stops once the current
    fit is exact to rounding, which keeps flat or perfectly polynomial
    data at the lowest adequate order.
    """
    x, y = _split_points(points)
    require(x.size >= 2, "order selection needs at least 2 points")
    require(
        1 <= max_order <= x.size - 1,
        f"max_order must be in [1, {x.size - 1}], got {max_order}",
    )
    n = x.size
    scale = max(1.0, float(np.max(np.abs(y))) if y.size else 1.0)
    sse_floor = n * (_EXACT_FIT_FLOOR * scale) ** 2

    poly = fit_poly(points, 1)  # infeasible line (all x equal) propagates
    abs_err, sse = _errors(poly, x, y)
    scanned = [(1, sse)]

    order = 1
    while order < max_order:
        if sse <= sse_floor:
            break
        dof = n - (order + 2)
        if dof < 1:
            break
        try:
            candidate = fit_poly(points, order + 1)
        except NumericalError:
            break
        cand_abs, cand_sse = _errors(candidate, x, y)
        scanned.append((order + 1, cand_sse))
        if cand_sse <= 0.0 or sse <= cand_sse:
            f_stat = np.inf if cand_sse <= 0.0 and sse > sse_floor else 0.0
        else:
            f_stat = (sse - cand_sse) / (cand_sse / dof)
        if f_stat <= stats.f.ppf(1.0 - significance, 1, dof):
            break
        poly, abs_err, sse = candidate, cand_abs, cand_sse
        order += 1

    return FitReport(
        poly=poly,
        total_abs_error=abs_err,
        sse=sse,
        order_scanned=range(1, max_order + 1),
        scanned_sse=tuple(scanned),
    )


def normal_equations_fit(points: Iterable[tuple[float, float]], order: int) -> Polynomial:
    """Textbook normal-equations solve, kept for cross-checks and docs.

    Forms ``V.T @ V`` explicitly and solves it directly; only sensible on
    well-conditioned inputs.  The production path is :func:`fit_poly`.
    """
    x, y = _split_points(list(points))
    design = npoly.polyvander(x, order)
    gram = design.T @ design
    rhs = design.T @ y
    try:
        coeffs = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"normal equations are singular: {exc}") from exc
    return Polynomial(tuple(coeffs))
