"""Seeded synthetic multi-sensor datasets for property testing.

Noise is symmetric and bounded (normal draws redrawn beyond four standard
deviations) so the quality gate interacts with injected outliers in a
well-defined way: a clean reading can never be gated out when the gate is
at least five noise stds wide, while a displaced reading always is once
the displacement exceeds the gate width.  Randomness comes from numpy's
``default_rng`` (PCG64), so a seed pins the dataset bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .fusion import QualityGate, SensorSeries
from .io import Dataset
from .validation import require

__all__ = ["SynthSpec", "generate"]


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic dataset."""

    n_sensors: int
    true_value: float
    sensor_noise_std: tuple[float, ...]
    readings_per_sensor: int
    outlier_rate: float = 0.0
    outlier_offset: float = 0.0
    seed: int = 0
    unit: str = "a.u."
    gate_halfwidth: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "sensor_noise_std", tuple(float(s) for s in self.sensor_noise_std)
        )
        require(self.n_sensors >= 3, f"n_sensors must be >= 3, got {self.n_sensors}")
        require(
            len(self.sensor_noise_std) == self.n_sensors,
            "sensor_noise_std must provide one std per sensor",
        )
        require(
            all(s > 0 for s in self.sensor_noise_std),
            "noise stds must all be positive",
        )
        require(
            len(set(self.sensor_noise_std)) > 1,
            "noise stds must not all be equal (the fit needs influence-factor spread)",
        )
        require(
            self.readings_per_sensor >= 2,
            f"readings_per_sensor must be >= 2, got {self.readings_per_sensor}",
        )
        require(0.0 <= self.outlier_rate <= 1.0, "outlier_rate must be in [0, 1]")
        if self.outlier_rate > 0:
            require(self.outlier_offset > 0, "outlier_offset must be > 0 when used")

    @property
    def gate(self) -> QualityGate:
        half = self.gate_halfwidth
        if half is None:
            half = 5.0 * max(self.sensor_noise_std)
        return QualityGate(self.true_value - half, self.true_value + half)


def _bounded_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    """Standard normal draws redrawn until within +/-4."""
    z = rng.standard_normal(size)
    mask = np.abs(z) > 4.0
    while mask.any():
        z[mask] = rng.standard_normal(int(mask.sum()))
        mask = np.abs(z) > 4.0
    return z


def generate(spec: SynthSpec) -> Dataset:
    """Build the dataset described by ``spec`` deterministically."""
    if not isinstance(spec, SynthSpec):
        raise InputError(f"expected a SynthSpec, got {type(spec).__name__}")
    rng = np.random.default_rng(spec.seed)
    sensors = []
    m = spec.readings_per_sensor
    for i, std in enumerate(spec.sensor_noise_std):
        readings = spec.true_value + std * _bounded_normal(rng, m)
        if spec.outlier_rate > 0:
            displaced = rng.random(m) < spec.outlier_rate
            signs = rng.integers(0, 2, m) * 2 - 1
            readings = readings + displaced * signs * spec.outlier_offset
        sensors.append(
            SensorSeries(sensor_id=f"S{i + 1}#", readings=readings, unit=spec.unit)
        )
    return Dataset(
        name=f"synth-{spec.seed}",
        unit=spec.unit,
        sensors=sensors,
        gate=spec.gate,
    )
