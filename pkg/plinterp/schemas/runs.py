from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from plinterp.core.exceptions import ConfigError
from plinterp.models.enums import ReportFormat, SynthesisMode
from plinterp.schemas.scenes import SyntheticSpec
from plinterp.settings import settings
from plinterp.utils.frames import static_root

# fields holding a glob or {id} template
INPUT_FIELDS = ("prev", "next", "flow_fwd", "flow_bwd", "optical_fwd", "optical_bwd", "pred", "gt")


class DensifyParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int = Field(settings.DENSIFY_K, ge=1, le=settings.DENSIFY_MAX_K, description="neighbours per pixel")
    radius: int = Field(settings.DENSIFY_RADIUS, ge=1, description="search radius, pixels")


class CropSize(BaseModel):
    model_config = ConfigDict(frozen=True)

    width: int = Field(settings.CROP_WIDTH, gt=0)
    height: int = Field(settings.CROP_HEIGHT, gt=0)

    @classmethod
    def parse(cls, text: str) -> "CropSize":
        """``WxH`` or ``default`` (the 1216x256 KITTI bottom crop)."""
        if text.strip().lower() == "default":
            return cls()
        w, _, h = text.lower().partition("x")
        try:
            return cls(width=int(w), height=int(h))
        except ValueError:
            raise ConfigError(f"crop must be WxH or default, got {text!r}")


class RunConfig(BaseModel):
    """
    Inputs and parameters of one batch run. The first input glob defines the frames; the
    other globs pair with them by file stem, and templates with ``{id}`` are filled with
    each frame id (see ``plinterp.utils.frames``). Unknown keys are rejected, and the
    fixed directory part of every input must exist.
    """

    model_config = ConfigDict(extra="forbid")

    prev: Optional[str] = Field(None, description="glob of depth maps at t-1")
    next: Optional[str] = Field(None, description="glob of depth maps at t+1")
    flow_fwd: Optional[str] = Field(None, description="glob of PLSF0001 flows aligned to the t-1 clouds")
    flow_bwd: Optional[str] = Field(None, description="glob of PLSF0001 flows aligned to the t+1 clouds")
    optical_fwd: Optional[str] = Field(None, description="glob of PLOF0001 optical flows t-1 -> t+1")
    optical_bwd: Optional[str] = Field(None, description="glob of PLOF0001 optical flows t+1 -> t-1")
    pred: Optional[str] = Field(None, description="glob of predicted dense depth maps")
    gt: Optional[str] = Field(None, description="glob of ground-truth dense depth maps")
    intrinsics: Optional[Path] = None
    mode: SynthesisMode = SynthesisMode(settings.SYNTHESIS_MODE)
    alpha: float = Field(settings.ALPHA, ge=0, le=1)
    densify: DensifyParams = DensifyParams()
    crop: Optional[CropSize] = None
    sample_points: int = Field(settings.SAMPLE_POINTS, ge=0, description="points kept per input cloud, 0 keeps all")
    output: Path = Path("out")
    report: ReportFormat = ReportFormat(settings.REPORT_FORMAT)
    write_ply: bool = False
    seed: int = settings.SEED
    jobs: Optional[int] = Field(settings.JOBS, gt=0)

    @model_validator(mode="after")
    def _inputs_exist(self) -> "RunConfig":
        if self.intrinsics is not None and not self.intrinsics.is_file():
            raise ValueError(f"intrinsics file does not exist: {self.intrinsics}")
        for name in INPUT_FIELDS:
            pattern = getattr(self, name)
            if pattern is not None and not static_root(pattern).exists():
                raise ValueError(f"{name}: {static_root(pattern)} does not exist")
        return self


class SynthRun(BaseModel):
    """Arguments of one ``synth`` invocation."""

    model_config = ConfigDict(extra="forbid")

    spec: SyntheticSpec = SyntheticSpec()
    frames: int = Field(1, ge=1)
    output: Path = Path("synth")
    jobs: Optional[int] = Field(settings.JOBS, gt=0)
