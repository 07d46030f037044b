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
    NextOpt,
    OutputOpt,
    PlyOpt,
    PrevOpt,
    ReportOpt,
    SeedOpt,
)
from plinterp.controllers import baseline_controller
from plinterp.models.enums import BaselineKind
from plinterp.utils.run_config import build_run_config


def baseline(
    which: Annotated[BaselineKind, typer.Argument(help="average | optical-flow")],
    prev: PrevOpt = None,
    next: NextOpt = None,
    optical_fwd: Annotated[
        Optional[str], typer.Option("--optical-fwd", help="glob or {id} template of PLOF0001 flows t-1 -> t+1")
    ] = None,
    optical_bwd: Annotated[
        Optional[str], typer.Option("--optical-bwd", help="glob or {id} template of PLOF0001 flows t+1 -> t-1")
    ] = None,
    gt: GtOpt = None,
    intrinsics: IntrinsicsOpt = None,
    alpha: AlphaOpt = None,
    densify_k: DensifyKOpt = None,
    densify_radius: DensifyRadiusOpt = None,
    crop: CropOpt = None,
    output: OutputOpt = None,
    report: ReportOpt = None,
    write_ply: PlyOpt = None,
    seed: SeedOpt = None,
    jobs: JobsOpt = None,
    config: ConfigOpt = None,
):
    """Image-plane interpolation baselines, scored like `interpolate`."""
    run = build_run_config(
        config,
        prev=prev,
        next=next,
        optical_fwd=optical_fwd,
        optical_bwd=optical_bwd,
        gt=gt,
        intrinsics=intrinsics,
        alpha=alpha,
        densify_k=densify_k,
        densify_radius=densify_radius,
        crop=crop,
        output=output,
        report=report,
        write_ply=write_ply,
        seed=seed,
        jobs=jobs,
    )
    result = baseline_controller.run(run, which)
    baseline_controller.exit_on_failures(result)
