"""Batch command-line interface.

Exit codes: 0 success, 1 input error, 2 numerical failure, 3 no prognosis.
"""
from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from . import io
from .errors import InputError, NoPrognosisError, NumericalError
from .glcalc import amplitude_curve
from .pipeline import run_pipeline, run_vehicle
from .prognosis import WarningPolicy, fit_trend, warning_time

_EXIT_INPUT = 1
_EXIT_NUMERICAL = 2
_EXIT_NO_PROGNOSIS = 3


def _mapped_exit(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NoPrognosisError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_EXIT_NO_PROGNOSIS)
        except NumericalError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_EXIT_NUMERICAL)
        except (InputError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_EXIT_INPUT)

    return wrapper


def _load_config(config_path: str | None, nu, step, horizon) -> io.RunConfig:
    config = io.load_run_config(config_path) if config_path else io.RunConfig()
    if nu is not None:
        config.nu = nu
    if step is not None:
        config.h = step
    if horizon is not None:
        config.horizon_months = horizon
    return config


def _common_options(func):
    for option in reversed(
        [
            click.option("--nu", type=float, default=None, help="Fractional order in [0, 1]."),
            click.option("--step", type=float, default=None, help="Grid step h."),
            click.option(
                "--config",
                "config_path",
                type=str,
                default=None,
                help="Run configuration file (key = value lines).",
            ),
            click.option(
                "--format",
                "fmt",
                type=click.Choice(["json", "text"]),
                default="text",
                show_default=True,
                help="Report format.",
            ),
            click.option("--out", type=str, default=None, help="Write the report here."),
            click.option(
                "--horizon", type=float, default=None, help="Prediction horizon, months."
            ),
        ]
    ):
        func = option(func)
    return func


@click.group()
@click.version_option(package_name="fracfuse")
def main() -> None:
    """Fractional-order differential fusion and early warning for sensor data."""


@main.command("fuse")
@click.argument("dataset_path", metavar="DATASET")
@_common_options
@_mapped_exit
def fuse_cmd(dataset_path, nu, step, config_path, fmt, out, horizon) -> None:
    """Fuse one dataset and report the fused and rescaled values."""
    config = _load_config(config_path, nu, step, horizon)
    dataset = io.load_dataset(dataset_path)
    report = run_pipeline(dataset, config)
    click.echo(io.emit(report, fmt=fmt, path=out), nl=False)


@main.command("diagnose")
@click.argument("dataset_path", metavar="DATASET")
@click.option("--limit", type=float, default=None, help="Rated limit of the quantity.")
@click.option("--k", type=float, default=None, help="Safety coefficient in (0, 1).")
@_common_options
@_mapped_exit
def diagnose_cmd(dataset_path, limit, k, nu, step, config_path, fmt, out, horizon) -> None:
    """Fuse a dataset and judge it against its warning threshold."""
    config = _load_config(config_path, nu, step, horizon)
    dataset = io.load_dataset(dataset_path)
    if limit is not None or k is not None:
        if limit is None or k is None:
            raise InputError("--limit and --k must be given together")
        config.policies[dataset.name] = WarningPolicy(limit, k)
    if dataset.name not in config.policies:
        raise InputError(
            f"no warning policy for {dataset.name!r}; pass --limit/--k or --config"
        )
    report = run_pipeline(dataset, config)
    click.echo(io.emit(report, fmt=fmt, path=out), nl=False)


@main.command("predict")
@click.argument("trend_path", metavar="TREND")
@click.option("--limit", type=float, required=True, help="Rated limit of the quantity.")
@click.option("--k", type=float, default=0.98, show_default=True, help="Safety coefficient.")
@click.option(
    "--horizon",
    type=float,
    default=None,
    help="Prediction horizon, months.",
)
@_mapped_exit
def predict_cmd(trend_path, limit, k, horizon) -> None:
    """Fit a time trend and report when it crosses the warning threshold."""
    policy = WarningPolicy(limit, k)
    trend = fit_trend(io.load_trend(trend_path))
    thr = policy.k * policy.rated_limit
    kwargs = {} if horizon is None else {"horizon": horizon}
    t_y = warning_time(trend, thr, **kwargs)
    if t_y is None:
        raise NoPrognosisError(
            f"trend never reaches threshold {thr:g} within the horizon"
        )
    click.echo(
        f"threshold={thr:g} order={trend.poly.order} "
        f"coeffs={[round(c, 6) for c in trend.poly.coeffs]} t_y={t_y:.4f} months"
    )


@main.command("vehicle")
@click.argument("dataset_paths", metavar="DATASET...", nargs=-1, required=True)
@_common_options
@_mapped_exit
def vehicle_cmd(dataset_paths, nu, step, config_path, fmt, out, horizon) -> None:
    """Fuse several components and name the earliest failure source."""
    config = _load_config(config_path, nu, step, horizon)
    datasets = [io.load_dataset(p) for p in dataset_paths]
    report = run_vehicle(datasets, config)
    click.echo(io.emit(report, fmt=fmt, path=out), nl=False)


@main.command("curve")
@click.option(
    "--nu",
    "nus",
    type=float,
    multiple=True,
    default=(0.1, 0.3, 0.5, 0.7, 0.9),
    show_default=True,
    help="Fractional order; repeat for several curves.",
)
@click.option("--lo", type=float, default=0.0, show_default=True, help="Lowest frequency.")
@click.option("--hi", type=float, default=10.0, show_default=True, help="Highest frequency.")
@click.option("--samples", type=int, default=101, show_default=True)
@click.option("--out", type=str, default=None, help="Write the table here.")
@_mapped_exit
def curve_cmd(nus, lo, hi, samples, out) -> None:
    """Export the operator amplitude response as a delimited table."""
    table = amplitude_curve(list(nus), (lo, hi), samples)
    lines = ["nu,omega,gain"]
    lines += [f"{nu!r},{omega!r},{gain!r}" for nu, omega, gain in table]
    text = "\n".join(lines) + "\n"
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
