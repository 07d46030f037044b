from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

BENCH_COLUMNS = ["n", "build_ms", "chamfer_indexed_ms", "chamfer_brute_ms", "speedup"]


class BenchRun(BaseModel):
    """Arguments of one ``bench`` invocation; unset values fall back to the settings in the controller."""

    model_config = ConfigDict(extra="forbid")

    sizes: list[int] = []
    repeats: Optional[int] = None
    brute_max: Optional[int] = Field(None, ge=0)
    seed: Optional[int] = None
    output: Optional[Path] = None


class BenchRow(BaseModel):
    """Median timings for one cloud size. Brute-force fields are empty when that run was skipped."""

    n: int = Field(..., gt=0)
    build_ms: float
    chamfer_indexed_ms: float
    chamfer_brute_ms: Optional[float] = None

    @property
    def speedup(self) -> Optional[float]:
        if self.chamfer_brute_ms is None or self.chamfer_indexed_ms <= 0:
            return None
        return self.chamfer_brute_ms / self.chamfer_indexed_ms

    def row(self) -> dict:
        return {
            "n": self.n,
            "build_ms": self.build_ms,
            "chamfer_indexed_ms": self.chamfer_indexed_ms,
            "chamfer_brute_ms": self.chamfer_brute_ms,
            "speedup": self.speedup,
        }
