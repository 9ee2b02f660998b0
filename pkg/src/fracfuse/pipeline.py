"""End-to-end batch pipeline: summarize, fuse, diagnose, predict, aggregate.

Reports are plain dicts with stable key order so that json emission is
byte-deterministic and round-trips exactly.  When a dataset ships with
published reference values, every comparable quantity is checked against
them and the comparison recorded; entries whose deviation exceeds the
stated tolerance are the report's deviation notes.  Published figures are
never allowed to override computed results: the computation wins and the
mismatch is reported.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .fusion import (
    FusionConfig,
    FusionResult,
    SensorSummary,
    check_consistency,
    fuse,
    improvement_ratio,
    summarize,
)
from .io import Dataset, RunConfig
from .prognosis import (
    ComponentPrognosis,
    Status,
    TrendModel,
    aggregate,
    component_prognosis,
    fit_trend,
)

__all__ = ["run_pipeline", "run_vehicle", "Deviation"]


@dataclass(frozen=True)
class Deviation:
    """One computed-vs-published comparison."""

    quantity: str
    computed: float
    published: object
    tolerance: object
    delta: float
    within: bool

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "computed": self.computed,
            "published": self.published,
            "tolerance": self.tolerance,
            "delta": self.delta,
            "within": self.within,
        }


def _compare_value(quantity: str, computed: float, entry: dict) -> Deviation:
    published = float(entry["value"])
    tolerance = float(entry.get("tolerance", 0.0))
    delta = abs(computed - published)
    return Deviation(
        quantity=quantity,
        computed=float(computed),
        published=published,
        tolerance=tolerance,
        delta=delta,
        within=delta <= tolerance,
    )


def _compare_band(quantity: str, computed: float, entry: dict) -> Deviation:
    lo, hi = (float(v) for v in entry["band"])
    if lo <= computed <= hi:
        delta = 0.0
    else:
        delta = lo - computed if computed < lo else computed - hi
    return Deviation(
        quantity=quantity,
        computed=float(computed),
        published=[lo, hi],
        tolerance=f"band around published {entry.get('printed')}",
        delta=float(delta),
        within=delta == 0.0,
    )


def _published_deviations(
    published: dict,
    result: FusionResult,
    prognosis: ComponentPrognosis | None,
    t_y: float | None,
) -> list[Deviation]:
    out: list[Deviation] = []
    fused_mean = float(result.fused.mean())
    if "reference" in published:
        out.append(_compare_value("reference", result.reference, published["reference"]))
    if "fused_mean" in published:
        out.append(_compare_value("fused_mean", fused_mean, published["fused_mean"]))
    if "amplification" in published:
        out.append(_compare_value("amplification", result.K, published["amplification"]))
    if "post_fusion_std" in published:
        out.append(
            _compare_band("post_fusion_std", result.post_std, published["post_fusion_std"])
        )
    if "rescaled" in published:
        entry = published["rescaled"]
        tolerance = float(entry.get("tolerance", 0.0))
        values = entry["values"]
        by_id = dict(zip(result.sensor_ids, result.rescaled))
        for sensor_id, ref in values.items():
            if sensor_id not in by_id:
                raise InputError(
                    f"published rescaled value names unknown sensor {sensor_id!r}"
                )
            computed = float(by_id[sensor_id])
            delta = abs(computed - float(ref))
            out.append(
                Deviation(
                    quantity=f"rescaled.{sensor_id}",
                    computed=computed,
                    published=float(ref),
                    tolerance=tolerance,
                    delta=delta,
                    within=delta <= tolerance,
                )
            )
    if prognosis is not None and "threshold" in published:
        out.append(_compare_value("threshold", prognosis.threshold, published["threshold"]))
    if t_y is not None and "warning_time" in published:
        out.append(_compare_value("warning_time", t_y, published["warning_time"]))
    return out


def _summary_dict(summary: SensorSummary) -> dict:
    return {
        "sensor_id": summary.sensor_id,
        "retained": summary.retained,
        "mean": summary.mean,
        "std": summary.std,
    }


def run_pipeline(dataset: Dataset, config: RunConfig | None = None) -> dict:
    """Process one dataset end to end and return its report dict."""
    config = config or RunConfig()
    summaries = [summarize(series, dataset.gate) for series in dataset.sensors]
    consistency = check_consistency(summaries, config.consistency_tol)
    result = fuse(
        summaries,
        FusionConfig(
            nu=config.nu,
            h=config.h,
            consistency_tol=config.consistency_tol,
            max_rounds=config.max_rounds,
        ),
    )

    trend: TrendModel | None = None
    if dataset.trend_samples is not None:
        trend = fit_trend(dataset.trend_samples)

    prognosis = None
    policy = config.policies.get(dataset.name)
    if policy is not None:
        prognosis = component_prognosis(
            component=dataset.name,
            current_value=result.reference,
            policy=policy,
            trend=trend,
            horizon=config.horizon_months,
        )

    deviations: list[Deviation] = []
    if dataset.published:
        deviations = _published_deviations(
            dataset.published,
            result,
            prognosis,
            prognosis.t_y if prognosis is not None else None,
        )

    report = {
        "dataset": {
            "name": dataset.name,
            "unit": dataset.unit,
            "n_sensors": len(dataset.sensors),
            "gate": [dataset.gate.lo, dataset.gate.hi],
            "source": dataset.source,
        },
        "config": {
            "nu": config.nu,
            "h": config.h,
            "consistency_tol": config.consistency_tol,
            "max_rounds": config.max_rounds,
            "horizon_months": config.horizon_months,
        },
        "summaries": [_summary_dict(s) for s in summaries],
        "consistency": {
            "passed": consistency.passed,
            "max_rel_deviation": consistency.max_rel_deviation,
            "tol": consistency.tol,
        },
        "fusion": {
            "fit_order": result.fit.order,
            "fit_coeffs": list(result.fit.poly.coeffs),
            "fit_sse": result.fit.sse,
            "fit_total_abs_error": result.fit.total_abs_error,
            "grid": [result.grid.a, result.grid.b],
            "n_steps": result.grid.n_steps,
            "fused": [float(v) for v in result.fused],
            "rescaled": [float(v) for v in result.rescaled],
            "K": result.K,
            "reference": result.reference,
            "pre_std": result.pre_std,
            "post_std": result.post_std,
            "improvement_ratio": _json_safe_ratio(result),
            "rounds": result.rounds,
        },
    }
    if trend is not None:
        report["trend"] = {
            "order": trend.poly.order,
            "coeffs": list(trend.poly.coeffs),
            "t_last": trend.t_last,
        }
    if prognosis is not None:
        report["prognosis"] = {
            "component": prognosis.component,
            "status": prognosis.status.value,
            "current_value": prognosis.current_value,
            "threshold": prognosis.threshold,
            "t_y": prognosis.t_y,
        }
    report["deviations"] = [d.to_dict() for d in deviations]
    return report


def _json_safe_ratio(result: FusionResult) -> float | None:
    ratio = improvement_ratio(result)
    return None if ratio == float("inf") else ratio


def run_vehicle(datasets: Sequence[Dataset], config: RunConfig | None = None) -> dict:
    """Process several components and append the min-rule verdict."""
    if not datasets:
        raise InputError("run_vehicle needs at least one dataset")
    config = config or RunConfig()
    reports = [run_pipeline(ds, config) for ds in datasets]
    components = []
    for ds, rep in zip(datasets, reports):
        prog = rep.get("prognosis")
        if prog is None:
            raise InputError(
                f"dataset {ds.name!r} has no warning policy configured; "
                f"add 'policy.{ds.name}.rated_limit' and 'policy.{ds.name}.k'"
            )
        components.append(
            ComponentPrognosis(
                component=prog["component"],
                status=Status(prog["status"]),
                current_value=prog["current_value"],
                threshold=prog["threshold"],
                t_y=prog["t_y"],
            )
        )
    verdict = aggregate(components)
    return {
        "components": reports,
        "vehicle": {
            "t_min": verdict.t_min,
            "source": verdict.source,
            "status": Status.WARNING.value
            if any(c.status is Status.WARNING for c in components)
            else Status.NORMAL.value,
        },
    }
