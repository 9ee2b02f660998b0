"""Dataset files, run configuration, and report emission.

Dataset files are hand-editable delimited text: optional ``# key: value``
metadata lines, then a header row ``sensor_id,reading_1,...,reading_n``
and one row per sensor.  Two sidecar files are picked up automatically
when present next to a dataset:

* ``<stem>.trend.csv``      time series of the fused value over months
* ``<stem>.published.json`` externally published reference values that the
  pipeline compares its own results against (see ``pipeline.deviations``)

Run configuration is a flat ``key = value`` file; per-component warning
policies use dotted keys such as ``policy.engine.rated_limit``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import InputError
from .fusion import QualityGate, SensorSeries
from .prognosis import DEFAULT_HORIZON_MONTHS, WarningPolicy
from .validation import require

__all__ = [
    "Dataset",
    "RunConfig",
    "load_dataset",
    "save_dataset",
    "load_trend",
    "load_run_config",
    "fixture_path",
    "emit",
]


@dataclass
class Dataset:
    """One component's sensor readings plus optional trend and references."""

    name: str
    unit: str
    sensors: list[SensorSeries]
    gate: QualityGate
    trend_samples: np.ndarray | None = None
    published: dict | None = None
    source: str | None = None

    def __post_init__(self) -> None:
        require(len(self.sensors) >= 1, f"dataset {self.name} has no sensors")
        units = {s.unit for s in self.sensors if s.unit}
        require(
            units <= {self.unit},
            f"dataset {self.name}: sensor units {sorted(units)} do not all match "
            f"dataset unit {self.unit!r}",
        )


@dataclass
class RunConfig:
    """Pipeline parameters plus per-component warning policies."""

    nu: float = 0.5
    h: float = 0.01
    consistency_tol: float = 0.05
    max_rounds: int = 3
    horizon_months: float = DEFAULT_HORIZON_MONTHS
    policies: dict[str, WarningPolicy] = field(default_factory=dict)


def _read_lines(path: Path) -> list[str]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise InputError(f"{path} is empty")
    return text.splitlines()


def _split_meta(lines: list[str]) -> tuple[dict[str, str], list[tuple[int, str]]]:
    """Separate leading '# key: value' lines from data rows (1-based line nos)."""
    meta: dict[str, str] = {}
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        rows.append((lineno, raw))
    return meta, rows


def _parse_float(cell: str, path: Path, lineno: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise InputError(
            f"{path}:{lineno}: column {column!r} has non-numeric value {cell!r}"
        ) from None
    if not math.isfinite(value):
        raise InputError(f"{path}:{lineno}: column {column!r} is not finite: {cell!r}")
    return value


def load_dataset(path: str | Path) -> Dataset:
    """Load a dataset file, validating structure and numeric content."""
    path = Path(path)
    meta, rows = _split_meta(_read_lines(path))
    if not rows:
        raise InputError(f"{path} contains no data rows")

    for key in ("unit", "gate"):
        if key not in meta:
            raise InputError(f"{path}: missing '# {key}:' metadata line")
    gate_parts = [p.strip() for p in meta["gate"].replace(";", ",").split(",") if p.strip()]
    if len(gate_parts) != 2:
        raise InputError(f"{path}: gate metadata must be 'lo, hi', got {meta['gate']!r}")
    gate = QualityGate(
        _parse_float(gate_parts[0], path, 0, "gate.lo"),
        _parse_float(gate_parts[1], path, 0, "gate.hi"),
    )
    name = meta.get("name", path.stem)
    unit = meta["unit"]

    header_line, header_raw = rows[0]
    header = next(csv.reader([header_raw]))
    header = [h.strip() for h in header]
    if not header or header[0] != "sensor_id":
        raise InputError(f"{path}:{header_line}: first column must be 'sensor_id'")
    reading_cols = [h for h in header[1:] if h != "unit"]
    if not reading_cols:
        raise InputError(f"{path}:{header_line}: no reading columns in header")
    unit_col = header.index("unit") if "unit" in header else None

    sensors = []
    for lineno, raw in rows[1:]:
        cells = [c.strip() for c in next(csv.reader([raw]))]
        if len(cells) != len(header):
            raise InputError(
                f"{path}:{lineno}: expected {len(header)} columns, got {len(cells)}"
            )
        sensor_id = cells[0]
        if not sensor_id:
            raise InputError(f"{path}:{lineno}: empty sensor_id")
        if unit_col is not None and cells[unit_col] and cells[unit_col] != unit:
            raise InputError(
                f"{path}:{lineno}: sensor unit {cells[unit_col]!r} does not match "
                f"dataset unit {unit!r}"
            )
        values = [
            _parse_float(cells[idx], path, lineno, col)
            for idx, col in enumerate(header)
            if idx > 0 and idx != unit_col
        ]
        if not values:
            raise InputError(f"{path}:{lineno}: sensor {sensor_id} has no readings")
        sensors.append(SensorSeries(sensor_id=sensor_id, readings=np.array(values), unit=unit))

    trend = None
    trend_path = path.parent / f"{path.stem}.trend.csv"
    if trend_path.exists():
        trend = load_trend(trend_path)
    published = None
    published_path = path.parent / f"{path.stem}.published.json"
    if published_path.exists():
        try:
            published = json.loads(published_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InputError(f"{published_path}: invalid JSON: {exc}") from exc

    return Dataset(
        name=name,
        unit=unit,
        sensors=sensors,
        gate=gate,
        trend_samples=trend,
        published=published,
        source=str(path),
    )


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset in the same format ``load_dataset`` reads."""
    path = Path(path)
    n = max(s.readings.size for s in dataset.sensors)
    require(
        all(s.readings.size == n for s in dataset.sensors),
        "save_dataset requires equal reading counts per sensor",
    )
    lines = [
        f"# name: {dataset.name}",
        f"# unit: {dataset.unit}",
        f"# gate: {dataset.gate.lo!r}, {dataset.gate.hi!r}",
        "sensor_id," + ",".join(f"reading_{i + 1}" for i in range(n)),
    ]
    for s in dataset.sensors:
        lines.append(s.sensor_id + "," + ",".join(repr(float(v)) for v in s.readings))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_trend(path: str | Path) -> np.ndarray:
    """Load ``(t_months, value)`` samples from a trend file."""
    path = Path(path)
    _, rows = _split_meta(_read_lines(path))
    if not rows:
        raise InputError(f"{path} contains no data rows")
    header_line, header_raw = rows[0]
    header = [h.strip() for h in next(csv.reader([header_raw]))]
    if len(header) != 2:
        raise InputError(f"{path}:{header_line}: expected two columns (t, value)")
    samples = []
    for lineno, raw in rows[1:]:
        cells = [c.strip() for c in next(csv.reader([raw]))]
        if len(cells) != 2:
            raise InputError(f"{path}:{lineno}: expected 2 columns, got {len(cells)}")
        samples.append(
            (
                _parse_float(cells[0], path, lineno, header[0]),
                _parse_float(cells[1], path, lineno, header[1]),
            )
        )
    if not samples:
        raise InputError(f"{path} has a header but no samples")
    return np.asarray(samples, dtype=float)


_CONFIG_KEYS = {"nu", "h", "consistency_tol", "max_rounds", "horizon_months"}


def load_run_config(path: str | Path) -> RunConfig:
    """Parse a key=value run configuration file."""
    path = Path(path)
    config = RunConfig()
    policy_fields: dict[str, dict[str, float]] = {}
    for lineno, raw in enumerate(_read_lines(path), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _CONFIG_KEYS:
            number = _parse_float(value, path, lineno, key)
            if key == "max_rounds":
                setattr(config, key, int(number))
            else:
                setattr(config, key, number)
        elif key.startswith("policy."):
            parts = key.split(".")
            if len(parts) != 3 or parts[2] not in {"rated_limit", "k"}:
                raise InputError(
                    f"{path}:{lineno}: policy keys look like "
                    f"'policy.<component>.rated_limit' or 'policy.<component>.k'"
                )
            policy_fields.setdefault(parts[1], {})[parts[2]] = _parse_float(
                value, path, lineno, key
            )
        else:
            raise InputError(f"{path}:{lineno}: unknown configuration key {key!r}")
    for component, fields in policy_fields.items():
        missing = {"rated_limit", "k"} - fields.keys()
        if missing:
            raise InputError(
                f"{path}: policy for {component!r} is missing {sorted(missing)}"
            )
        config.policies[component] = WarningPolicy(fields["rated_limit"], fields["k"])
    return config


def fixture_path(name: str) -> Path:
    """Path of a bundled example data file."""
    root = resources.files("fracfuse").joinpath("fixtures")
    candidate = Path(str(root.joinpath(name)))
    if not candidate.exists():
        raise InputError(f"no bundled fixture named {name!r}")
    return candidate


def _render_text(payload: dict) -> str:
    lines: list[str] = []

    def emit_component(rep: dict) -> None:
        lines.append(f"dataset: {rep['dataset']['name']} ({rep['dataset']['unit']})")
        lines.append(
            f"  sensors: {rep['dataset']['n_sensors']}  "
            f"gate: ({rep['dataset']['gate'][0]:g}, {rep['dataset']['gate'][1]:g})"
        )
        cons = rep["consistency"]
        lines.append(
            f"  consistency: {'pass' if cons['passed'] else 'FAIL'} "
            f"(max rel dev {cons['max_rel_deviation']:.4g}, tol {cons['tol']:.4g})"
        )
        fus = rep["fusion"]
        coeffs = ", ".join(f"{c:.6g}" for c in fus["fit_coeffs"])
        lines.append(f"  fit: order {fus['fit_order']} [{coeffs}]")
        lines.append(
            f"  fusion: K={fus['K']:.4g} n_steps={fus['n_steps']} "
            f"rounds={fus['rounds']} reference={fus['reference']:.6g}"
        )
        lines.append(
            f"  dispersion: pre_std={fus['pre_std']:.4g} post_std={fus['post_std']:.4g}"
        )
        sensor_ids = [s["sensor_id"] for s in rep["summaries"]]
        for sensor_id, fused, rescaled in zip(sensor_ids, fus["fused"], fus["rescaled"]):
            lines.append(f"    {sensor_id}: fused={fused:.4f} rescaled={rescaled:.4f}")
        prog = rep.get("prognosis")
        if prog:
            t_y = "none" if prog["t_y"] is None else f"{prog['t_y']:.4g} months"
            lines.append(
                f"  prognosis: {prog['status']} "
                f"(value {prog['current_value']:.6g} vs threshold {prog['threshold']:.6g}), "
                f"crossing: {t_y}"
            )
        breaches = [d for d in rep.get("deviations", []) if not d["within"]]
        if breaches:
            lines.append("  deviations from published values:")
            for d in breaches:
                lines.append(
                    f"    {d['quantity']}: computed {d['computed']:.6g} vs "
                    f"published {d['published']} (tolerance {d['tolerance']})"
                )

    if "components" in payload:
        for rep in payload["components"]:
            emit_component(rep)
        verdict = payload["vehicle"]
        lines.append(
            f"vehicle verdict: source={verdict['source']} "
            f"t_min={verdict['t_min']:.4g} months ({verdict['status']})"
        )
    else:
        emit_component(payload)
    return "\n".join(lines) + "\n"


def emit(payload: dict, fmt: str = "json", path: str | Path | None = None) -> str:
    """Serialize a report dict as json or text; optionally write it out.

    The json form uses stable field order and round-trips floats exactly.
    """
    require(fmt in {"json", "text"}, f"format must be 'json' or 'text', got {fmt!r}")
    rendered = (
        json.dumps(payload, indent=2) + "\n" if fmt == "json" else _render_text(payload)
    )
    if path is not None:
        try:
            Path(path).write_text(rendered, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc}") from exc
    return rendered
