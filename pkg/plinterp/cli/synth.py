from pathlib import Path
from typing import Annotated, Optional

import typer

from plinterp.cli.options import ConfigOpt, IntrinsicsOpt, JobsOpt, SeedOpt, parse_vec3
from plinterp.controllers import synth_controller
from plinterp.models.enums import SceneLayout
from plinterp.schemas.base import Fail
from plinterp.utils.run_config import build_synth_run


def synth(
    output: Annotated[Optional[Path], typer.Option("--output", "-o", help="output directory [synth]")] = None,
    frames: Annotated[Optional[int], typer.Option("--frames", "-n", min=1, help="number of frame triples [1]")] = None,
    width: Annotated[Optional[int], typer.Option("--width", help="image width [1216]")] = None,
    height: Annotated[Optional[int], typer.Option("--height", help="image height [256]")] = None,
    layout: Annotated[Optional[SceneLayout], typer.Option("--layout", help="street | wall [street]")] = None,
    rotation: Annotated[Optional[str], typer.Option("--rotation", help="axis-angle rx,ry,rz in radians")] = None,
    translation: Annotated[Optional[str], typer.Option("--translation", help="tx,ty,tz in meters")] = None,
    pivot: Annotated[Optional[str], typer.Option("--pivot", help="rotation centre x,y,z [0,0,20]")] = None,
    sparsity: Annotated[Optional[float], typer.Option("--sparsity", help="valid-pixel fraction [0.04]")] = None,
    seed: SeedOpt = None,
    intrinsics: IntrinsicsOpt = None,
    jobs: JobsOpt = None,
    config: ConfigOpt = None,
):
    """Write synthetic frame triples with exact flows and ground truth."""
    run = build_synth_run(
        config,
        output=output,
        frames=frames,
        width=width,
        height=height,
        layout=layout,
        rotation=parse_vec3(rotation, "--rotation"),
        translation=parse_vec3(translation, "--translation"),
        pivot=parse_vec3(pivot, "--pivot"),
        sparsity=sparsity,
        seed=seed,
        intrinsics=intrinsics,
        jobs=jobs,
    )
    results = synth_controller.run(run.spec, run.frames, run.output, jobs=run.jobs)
    failed = [r for r in results if isinstance(r, Fail)]
    for r in failed:
        typer.echo(f"{r.frame_id}: {r.error_type}: {r.msg}", err=True)
    if failed:
        raise typer.Exit(code=1)
    typer.echo(f"wrote {run.frames} frame(s) to {run.output}")
