import math
from typing import Optional

from pydantic import BaseModel, Field, model_validator

# Column order of per-frame report rows; asserted by the tests.
REPORT_COLUMNS = [
    "frame_id",
    "rmse_mm",
    "mae_mm",
    "irmse_per_km",
    "imae_per_km",
    "cd_mean_m2",
    "cd_sum_m2",
    "n_valid",
    "wall_ms",
]

METRIC_FIELDS = ["rmse", "mae", "irmse", "imae", "cd_mean", "cd_sum"]


class MetricsReport(BaseModel):
    """Per-frame metrics. Unset fields were not computed for this frame."""

    rmse: Optional[float] = Field(None, ge=0, description="mm")
    mae: Optional[float] = Field(None, ge=0, description="mm")
    irmse: Optional[float] = Field(None, ge=0, description="1/km")
    imae: Optional[float] = Field(None, ge=0, description="1/km")
    cd_sum: Optional[float] = Field(None, ge=0, description="m^2")
    cd_mean: Optional[float] = Field(None, ge=0, description="m^2 per point")
    n_valid: int = Field(0, ge=0, description="evaluated pixels (gt > 0)")
    n_inverse_excluded: int = Field(0, ge=0, description="gt > 0 pixels with pred = 0, skipped by iRMSE/iMAE")
    n_pred: int = Field(0, ge=0)
    n_gt: int = Field(0, ge=0)
    depth_loss_mean: Optional[float] = Field(None, ge=0, description="m^2 per valid pixel")

    @model_validator(mode="after")
    def _finite(self) -> "MetricsReport":
        for name in METRIC_FIELDS + ["depth_loss_mean"]:
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
        return self

    def merged(self, other: "MetricsReport") -> "MetricsReport":
        """Fields set on ``other`` override this report's."""
        return self.model_copy(update=other.model_dump(exclude_unset=True))


class FrameReport(BaseModel):
    frame_id: str
    metrics: MetricsReport
    wall_ms: float = 0.0

    def row(self) -> dict:
        m = self.metrics
        return {
            "frame_id": self.frame_id,
            "rmse_mm": m.rmse,
            "mae_mm": m.mae,
            "irmse_per_km": m.irmse,
            "imae_per_km": m.imae,
            "cd_mean_m2": m.cd_mean,
            "cd_sum_m2": m.cd_sum,
            "n_valid": m.n_valid,
            "wall_ms": self.wall_ms,
        }


class MetricSummary(BaseModel):
    mean: Optional[float] = None
    std: Optional[float] = None
    count: int = 0


class AggregateReport(BaseModel):
    frames: list[FrameReport] = []
    summary: dict[str, MetricSummary] = {}
    frame_count: int = 0
    stage_ms: dict[str, float] = {}
    failures: dict[str, str] = {}
    label: str = ""
