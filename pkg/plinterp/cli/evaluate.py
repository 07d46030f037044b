from typing import Annotated, Optional

import typer

from plinterp.cli.options import ConfigOpt, CropOpt, GtOpt, IntrinsicsOpt, JobsOpt, OutputOpt, ReportOpt
from plinterp.controllers import evaluate_controller
from plinterp.utils.run_config import build_run_config


def evaluate(
    pred: Annotated[
        Optional[str], typer.Option("--pred", help="glob of predicted dense maps (defines the frames)")
    ] = None,
    gt: GtOpt = None,
    intrinsics: IntrinsicsOpt = None,
    crop: CropOpt = None,
    output: OutputOpt = None,
    report: ReportOpt = None,
    jobs: JobsOpt = None,
    config: ConfigOpt = None,
):
    """Depth and Chamfer metrics of predicted maps against ground truth, one row per frame."""
    run = build_run_config(
        config, pred=pred, gt=gt, intrinsics=intrinsics, crop=crop, output=output, report=report, jobs=jobs
    )
    result = evaluate_controller.run(run)
    evaluate_controller.exit_on_failures(result)
