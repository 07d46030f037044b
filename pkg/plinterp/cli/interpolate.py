from typing import Annotated, Optional

import typer

from plinterp.cli.options import (
    AlphaOpt,
    ConfigOpt,
    CropOpt,
    DensifyKOpt,
    DensifyRadiusOpt,
    GtOpt,
    IntrinsicsOpt,
    JobsOpt,
    ModeOpt,
    NextOpt,
    OutputOpt,
    PlyOpt,
    PrevOpt,
    ReportOpt,
    SampleOpt,
    SeedOpt,
)
from plinterp.controllers import interpolate_controller
from plinterp.utils.run_config import build_run_config


def interpolate(
    prev: PrevOpt = None,
    next: NextOpt = None,
    flow_fwd: Annotated[
        Optional[str], typer.Option("--flow-fwd", help="glob or {id} template of PLSF0001 flows for t-1")
    ] = None,
    flow_bwd: Annotated[
        Optional[str], typer.Option("--flow-bwd", help="glob or {id} template of PLSF0001 flows for t+1")
    ] = None,
    gt: GtOpt = None,
    intrinsics: IntrinsicsOpt = None,
    mode: ModeOpt = None,
    alpha: AlphaOpt = None,
    densify_k: DensifyKOpt = None,
    densify_radius: DensifyRadiusOpt = None,
    crop: CropOpt = None,
    sample_points: SampleOpt = None,
    output: OutputOpt = None,
    report: ReportOpt = None,
    write_ply: PlyOpt = None,
    seed: SeedOpt = None,
    jobs: JobsOpt = None,
    config: ConfigOpt = None,
):
    """Synthesize the dense depth map and Pseudo-LiDAR cloud between each t-1/t+1 pair."""
    run = build_run_config(
        config,
        prev=prev,
        next=next,
        flow_fwd=flow_fwd,
        flow_bwd=flow_bwd,
        gt=gt,
        intrinsics=intrinsics,
        mode=mode,
        alpha=alpha,
        densify_k=densify_k,
        densify_radius=densify_radius,
        crop=crop,
        sample_points=sample_points,
        output=output,
        report=report,
        write_ply=write_ply,
        seed=seed,
        jobs=jobs,
    )
    result = interpolate_controller.run(run)
    interpolate_controller.exit_on_failures(result)
