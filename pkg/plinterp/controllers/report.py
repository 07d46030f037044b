import csv
from pathlib import Path

import numpy as np
import orjson
from rich.table import Table

from plinterp.core.exceptions import MalformedFileError
from plinterp.models.enums import ReportFormat
from plinterp.schemas.metrics import (
    METRIC_FIELDS,
    REPORT_COLUMNS,
    AggregateReport,
    FrameReport,
    MetricSummary,
)

# metric field -> report column
COLUMN_OF = {
    "rmse": "rmse_mm",
    "mae": "mae_mm",
    "irmse": "irmse_per_km",
    "imae": "imae_per_km",
    "cd_mean": "cd_mean_m2",
    "cd_sum": "cd_sum_m2",
}
MEAN_ROW_ID = "mean"


class ReportController:
    def aggregate(
        self,
        frames: list[FrameReport],
        stage_ms: dict[str, float] | None = None,
        failures: dict[str, str] | None = None,
        label: str = "",
    ) -> AggregateReport:
        """Unweighted mean and population std of every metric over the frames that report it."""
        summary = {}
        for name in METRIC_FIELDS:
            values = [getattr(f.metrics, name) for f in frames if getattr(f.metrics, name) is not None]
            if values:
                arr = np.asarray(values, dtype=np.float64)
                summary[name] = MetricSummary(mean=float(np.mean(arr)), std=float(np.std(arr)), count=len(values))
            else:
                summary[name] = MetricSummary()
        return AggregateReport(
            frames=frames,
            summary=summary,
            frame_count=len(frames),
            stage_ms=stage_ms or {},
            failures=failures or {},
            label=label,
        )

    def mean_row(self, report: AggregateReport) -> dict:
        row = {column: None for column in REPORT_COLUMNS}
        row["frame_id"] = MEAN_ROW_ID
        for name, column in COLUMN_OF.items():
            row[column] = report.summary[name].mean if name in report.summary else None
        row["n_valid"] = sum(f.metrics.n_valid for f in report.frames)
        row["wall_ms"] = sum(f.wall_ms for f in report.frames)
        return row

    def write_csv(self, report: AggregateReport, path: Path) -> Path:
        """One row per frame in input order, then the aggregate row; empty cells are metrics not computed."""
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=REPORT_COLUMNS)
            writer.writeheader()
            for frame in report.frames:
                writer.writerow(frame.row())
            writer.writerow(self.mean_row(report))
        return path

    def write_json(self, report: AggregateReport, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = report.model_dump()
        payload["columns"] = REPORT_COLUMNS
        payload["rows"] = [frame.row() for frame in report.frames]
        path.write_bytes(orjson.dumps(payload, option=orjson.OPT_INDENT_2))
        return path

    def write(self, report: AggregateReport, output: Path, fmt: ReportFormat, name: str = "report") -> Path:
        if fmt == ReportFormat.JSON:
            return self.write_json(report, output / f"{name}.json")
        return self.write_csv(report, output / f"{name}.csv")

    def load_means(self, path: Path) -> dict[str, float | None]:
        """Aggregate means of a written report (CSV mean row or JSON summary), keyed by metric field."""
        if path.suffix == ".json":
            try:
                summary = orjson.loads(path.read_bytes())["summary"]
            except (orjson.JSONDecodeError, KeyError, TypeError):
                raise MalformedFileError("not a report written by plinterp", path=path)
            return {name: (summary.get(name) or {}).get("mean") for name in METRIC_FIELDS}

        with path.open(newline="", encoding="utf-8") as f:
            rows = [row for row in csv.DictReader(f) if row.get("frame_id") == MEAN_ROW_ID]
        if not rows:
            raise MalformedFileError("report has no aggregate row", path=path)
        return {name: float(rows[-1][column]) if rows[-1][column] else None for name, column in COLUMN_OF.items()}

    def comparison_table(self, reports: dict[str, dict[str, float | None]]) -> Table:
        table = Table(title="Aggregate means")
        table.add_column("run")
        for name in METRIC_FIELDS:
            table.add_column(COLUMN_OF[name], justify="right")
        for label, means in reports.items():
            table.add_row(label, *("-" if means[n] is None else f"{means[n]:.6g}" for n in METRIC_FIELDS))
        return table


report_controller = ReportController()
