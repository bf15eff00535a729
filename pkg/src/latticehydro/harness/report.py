"""Experiment reports: per-N statistics, verdicts, CSV/JSON emission."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

__all__ = ["ConvergenceReport", "mean_ci", "emit_report"]

CSV_HEADER = "t,observable_id,value,replica,N,seed"


def mean_ci(values, level: float = 0.95) -> tuple[float, float, float]:
    """Sample mean with a two-sided t confidence interval."""
    arr = np.asarray(values, dtype=float)
    m = float(arr.mean())
    if arr.size < 2:
        return m, m, m
    half = float(
        stats.t.ppf(0.5 + level / 2, arr.size - 1) * arr.std(ddof=1) / np.sqrt(arr.size)
    )
    return m, m - half, m + half


@dataclass
class ConvergenceReport:
    """Distances, trends and pass/fail verdicts of one experiment."""

    experiment: str
    kind: str
    config_hash: str
    rows: list[tuple] = field(default_factory=list)  # (t, id, value, rep, N, seed)
    per_n: dict = field(default_factory=dict)  # str(N) -> stats mapping
    verdicts: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    tolerance: float | None = None
    meta: dict = field(default_factory=dict)

    def add_row(self, t, observable_id, value, replica, n, seed) -> None:
        self.rows.append((float(t), str(observable_id), float(value), int(replica),
                          int(n), int(seed)))

    def passed(self) -> bool:
        return all(self.verdicts.values())

    def summary(self) -> dict:
        return {
            "experiment": self.experiment,
            "kind": self.kind,
            "config_hash": self.config_hash,
            "verdicts": self.verdicts,
            "warnings": self.warnings,
            "tolerance": self.tolerance,
            "per_n": self.per_n,
            "meta": self.meta,
            "passed": self.passed(),
        }


def emit_report(report: ConvergenceReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write the row CSV and the JSON summary; returns both paths.

    Output is a pure function of the report contents, so identical inputs
    yield byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{report.experiment}.csv"
    json_path = out / f"{report.experiment}_summary.json"
    lines = [CSV_HEADER]
    for t, oid, value, rep, n, seed in report.rows:
        lines.append(f"{t!r},{oid},{value!r},{rep},{n},{seed}")
    csv_path.write_text("\n".join(lines) + "\n")
    json_path.write_text(
        json.dumps(report.summary(), sort_keys=True, indent=2, default=_as_json)
        + "\n"
    )
    return csv_path, json_path


def _as_json(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj)!r}")
