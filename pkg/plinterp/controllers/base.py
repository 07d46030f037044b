from pathlib import Path
from typing import Callable, Optional

import typer
from rich.console import Console
from rich.markup import escape

from plinterp.controllers.report import report_controller
from plinterp.core.exceptions import ConfigError, MissingInputError
from plinterp.core.geometry import back_project, crop_bottom
from plinterp.core.metrics import cloud_metrics, depth_metrics
from plinterp.core.pool import FramePool
from plinterp.core.timing import stage
from plinterp.io import read_depth_png, read_intrinsics, write_cloud_bin, write_depth_png, write_ply
from plinterp.log import logger
from plinterp.schemas.base import Fail, Success
from plinterp.schemas.geometry import CameraIntrinsics, DepthMap, PointCloud
from plinterp.schemas.metrics import AggregateReport, FrameReport, MetricsReport
from plinterp.schemas.runs import CropSize, RunConfig

err_console = Console(stderr=True)


class FrameController:
    """Batch plumbing shared by the commands that process frames: inputs, outputs, evaluation and reports."""

    label = ""

    def require(self, config: RunConfig, *names: str, label: Optional[str] = None) -> None:
        missing = [name for name in names if getattr(config, name) is None]
        if missing:
            raise ConfigError(f"{label or self.label} needs --{', --'.join(m.replace('_', '-') for m in missing)}")

    def intrinsics(self, config: RunConfig) -> CameraIntrinsics:
        self.require(config, "intrinsics")
        return read_intrinsics(config.intrinsics)

    def load_map(self, path: Path, crop: Optional[CropSize]) -> tuple[DepthMap, tuple[int, int]]:
        depth = read_depth_png(path)
        if crop is None:
            return depth, (0, 0)
        return crop_bottom(depth, crop.width, crop.height)

    def load_pair(
        self, prev: Path, next_: Path, k: CameraIntrinsics, crop: Optional[CropSize]
    ) -> tuple[DepthMap, DepthMap, CameraIntrinsics]:
        with stage("read"):
            d_prev, (left, top) = self.load_map(prev, crop)
            d_next, _ = self.load_map(next_, crop)
        return d_prev, d_next, k.shifted(left, top)

    def evaluate(
        self, pred: DepthMap, pred_cloud: PointCloud, gt_path: Path, k: CameraIntrinsics, crop: Optional[CropSize]
    ) -> MetricsReport:
        """Depth metrics against the gt map and Chamfer distance against its back-projection."""
        with stage("read"):
            gt, _ = self.load_map(gt_path, crop)
        with stage("evaluate"):
            metrics = depth_metrics(pred, gt)
            metrics = metrics.merged(cloud_metrics(pred_cloud, back_project(gt, k)))
        return metrics

    def write_outputs(self, frame_id: str, dense: DepthMap, cloud: PointCloud, config: RunConfig) -> list[Path]:
        with stage("write"):
            written = [
                write_depth_png(dense, config.output / "depth" / f"{frame_id}.png"),
                write_cloud_bin(cloud, config.output / "cloud" / f"{frame_id}.bin"),
            ]
            if config.write_ply:
                written.append(write_ply(cloud, config.output / "ply" / f"{frame_id}.ply"))
        return written

    def run_frames(self, items: list[tuple[str, dict]], fn: Callable[[dict], MetricsReport], config: RunConfig):
        """Run ``fn`` on every frame; a frame lacking one of its inputs fails without being read."""

        def job(paths: dict) -> MetricsReport:
            missing = [name.replace("_", "-") for name, path in paths.items() if path is None]
            if missing:
                raise MissingInputError(f"no {', '.join(missing)} file for this frame")
            return fn(paths)

        return FramePool(job, jobs=config.jobs).map(items)

    def collect(self, results: list[Success | Fail], config: RunConfig, label: Optional[str] = None) -> AggregateReport:
        """Build the aggregate report from pool results and write it to the output directory."""
        label = label or self.label
        frames, failures, stage_ms = [], {}, {}
        for result in results:
            if isinstance(result, Fail):
                failures[result.frame_id] = f"{result.error_type}: {result.msg}"
                continue
            frames.append(FrameReport(frame_id=result.frame_id, metrics=result.data, wall_ms=result.wall_ms))
            for name, ms in result.stage_ms.items():
                stage_ms[name] = stage_ms.get(name, 0.0) + ms
        report = report_controller.aggregate(frames, stage_ms=stage_ms, failures=failures, label=label)
        path = report_controller.write(report, config.output, config.report)
        logger.info(f"{label}: {len(frames)} frame(s) ok, {len(failures)} failed, report at {path}")
        return report

    def exit_on_failures(self, report: AggregateReport) -> None:
        """List failed frames and exit with status 1 if there are any."""
        if not report.failures:
            return
        err_console.print(f"[bold red]{len(report.failures)} frame(s) failed[/]")
        for frame_id, msg in report.failures.items():
            err_console.print(f"  {frame_id}: {escape(msg)}")
        raise typer.Exit(code=1)
