"""Options shared by the batch commands. Every one defaults to None so a ``--config`` file value survives."""

from pathlib import Path
from typing import Annotated, Optional

import typer

from plinterp.models.enums import ReportFormat, SynthesisMode

ConfigOpt = Annotated[Optional[Path], typer.Option("--config", help="YAML file with any of these options")]
IntrinsicsOpt = Annotated[Optional[Path], typer.Option("--intrinsics", help="fu/fv/cu/cv text file")]
ModeOpt = Annotated[Optional[SynthesisMode], typer.Option("--mode", help="forward | backward | union [union]")]
AlphaOpt = Annotated[Optional[float], typer.Option("--alpha", help="temporal fraction of the output frame [0.5]")]
DensifyKOpt = Annotated[Optional[int], typer.Option("--densify-k", help="neighbours per filled pixel [8]")]
DensifyRadiusOpt = Annotated[Optional[int], typer.Option("--densify-radius", help="search radius in pixels [12]")]
CropOpt = Annotated[Optional[str], typer.Option("--crop", help="bottom-centre crop, WxH or 'default' (1216x256)")]
SampleOpt = Annotated[
    Optional[int], typer.Option("--sample-points", help="points kept per input cloud, 0 keeps all [17500]")
]
OutputOpt = Annotated[Optional[Path], typer.Option("--output", "-o", help="output directory [out]")]
ReportOpt = Annotated[Optional[ReportFormat], typer.Option("--report", help="csv | json [csv]")]
PlyOpt = Annotated[Optional[bool], typer.Option("--ply/--no-ply", help="also write ASCII PLY clouds")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="random seed [0]")]
JobsOpt = Annotated[Optional[int], typer.Option("--jobs", "-j", help="worker threads [logical cores]")]

PrevOpt = Annotated[Optional[str], typer.Option("--prev", help="glob of t-1 depth maps (defines the frames)")]
NextOpt = Annotated[Optional[str], typer.Option("--next", help="glob or {id} template of t+1 depth maps")]
GtOpt = Annotated[Optional[str], typer.Option("--gt", help="glob or {id} template of ground-truth dense maps")]


def parse_vec3(text: Optional[str], name: str) -> Optional[tuple[float, float, float]]:
    if text is None:
        return None
    parts = [p for p in text.replace(" ", "").split(",") if p]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError:
        values = ()
    if len(values) != 3:
        raise typer.BadParameter(f"expected three comma-separated numbers, got {text!r}", param_hint=name)
    return values
