import csv
import time

import orjson
import pytest
from pydantic import ValidationError

from plinterp.controllers.base import FrameController
from plinterp.controllers.report import report_controller
from plinterp.core.ctx import CTX_FRAME_ID
from plinterp.core.exceptions import ConfigError, MissingInputError, SizeMismatchError
from plinterp.core.pool import FramePool
from plinterp.core.timing import stage
from plinterp.models.enums import ReportFormat, SynthesisMode
from plinterp.schemas.base import Fail, Success
from plinterp.schemas.metrics import REPORT_COLUMNS, FrameReport, MetricsReport
from plinterp.schemas.runs import CropSize
from plinterp.utils.frames import discover_frames
from plinterp.utils.run_config import build_run_config

# ── Helpers ──────────────────────────────────────────────────────────────────


def _touch(directory, *names):
    directory.mkdir(parents=True, exist_ok=True)
    for name in names:
        (directory / name).write_bytes(b"")


def _frame(frame_id: str, rmse: float, cd: float | None = None, n_valid: int = 10) -> FrameReport:
    metrics = MetricsReport(
        rmse=rmse,
        mae=rmse / 2,
        cd_mean=cd,
        cd_sum=None if cd is None else cd * 100,
        n_valid=n_valid,
    )
    return FrameReport(frame_id=frame_id, metrics=metrics, wall_ms=5.0)


# ── Worker pool ──────────────────────────────────────────────────────────────


class TestFramePool:
    def test_results_keep_input_order(self):
        def job(delay: float) -> float:
            time.sleep(delay)
            return delay

        items = [(f"f{i}", d) for i, d in enumerate([0.05, 0.0, 0.03, 0.01, 0.0, 0.02])]
        results = FramePool(job, jobs=4).map(items)
        assert [r.frame_id for r in results] == [fid for fid, _ in items]
        assert [r.data for r in results] == [d for _, d in items]

    @pytest.mark.parametrize("jobs", [1, 3])
    def test_failure_is_isolated(self, jobs):
        def job(x: int) -> int:
            if x == 2:
                raise ValueError("bad frame")
            return x * 10

        results = FramePool(job, jobs=jobs).map([(str(i), i) for i in range(5)])
        assert isinstance(results[2], Fail)
        assert results[2].error_type == "ValueError"
        assert results[2].msg == "bad frame"
        assert [r.data for r in results if isinstance(r, Success)] == [0, 10, 30, 40]

    def test_frame_id_and_stage_times_are_per_job(self):
        def job(_):
            with stage("work"):
                return CTX_FRAME_ID.get()

        results = FramePool(job, jobs=2).map([("a", None), ("b", None)])
        assert [r.data for r in results] == ["a", "b"]
        assert all("work" in r.stage_ms for r in results)
        assert CTX_FRAME_ID.get() == "-"

    def test_empty_batch(self):
        assert FramePool(lambda x: x, jobs=2).map([]) == []


# ── Frame discovery ──────────────────────────────────────────────────────────


class TestDiscoverFrames:
    def test_globs_pair_by_stem(self, tmp_path):
        _touch(tmp_path / "prev", "0002.png", "0001.png")
        _touch(tmp_path / "next", "0002.png", "0001.png", "0000.png")
        frames = discover_frames(str(tmp_path / "prev" / "*.png"), next=str(tmp_path / "next" / "*.png"), gt=None)
        assert [fid for fid, _ in frames] == ["0001", "0002"]
        assert [paths["next"].name for _, paths in frames] == ["0001.png", "0002.png"]
        assert "gt" not in frames[0][1]

    def test_pairing_ignores_directory_order(self, tmp_path):
        _touch(tmp_path / "prev", "a.png", "b.png")
        _touch(tmp_path / "flow" / "x", "b.plsf")
        _touch(tmp_path / "flow" / "y", "a.plsf")
        frames = dict(discover_frames(str(tmp_path / "prev" / "*.png"), flow=str(tmp_path / "flow" / "*" / "*.plsf")))
        assert frames["a"]["flow"] == tmp_path / "flow" / "y" / "a.plsf"
        assert frames["b"]["flow"] == tmp_path / "flow" / "x" / "b.plsf"

    def test_template_resolved_per_frame(self, tmp_path):
        _touch(tmp_path / "prev", "0007.png")
        frames = discover_frames(str(tmp_path / "prev" / "*.png"), gt=str(tmp_path / "gt" / "{id}.png"))
        assert frames[0][1]["gt"] == tmp_path / "gt" / "0007.png"

    def test_unmatched_frame_gets_none(self, tmp_path):
        _touch(tmp_path / "prev", "1.png", "2.png")
        _touch(tmp_path / "next", "1.png")
        frames = dict(discover_frames(str(tmp_path / "prev" / "*.png"), next=str(tmp_path / "next" / "*.png")))
        assert frames["1"]["next"] == tmp_path / "next" / "1.png"
        assert frames["2"]["next"] is None

    def test_strict_pairing_rejects_unpaired_stems(self, tmp_path):
        _touch(tmp_path / "pred", "1.png", "2.png")
        _touch(tmp_path / "gt", "1.png", "3.png")
        with pytest.raises(SizeMismatchError):
            discover_frames(str(tmp_path / "pred" / "*.png"), strict=True, gt=str(tmp_path / "gt" / "*.png"))
        _touch(tmp_path / "gt", "2.png")
        (tmp_path / "gt" / "3.png").unlink()
        frames = discover_frames(str(tmp_path / "pred" / "*.png"), strict=True, gt=str(tmp_path / "gt" / "*.png"))
        assert [paths["gt"].name for _, paths in frames] == ["1.png", "2.png"]

    def test_ambiguous_stem(self, tmp_path):
        _touch(tmp_path / "prev", "1.png")
        _touch(tmp_path / "next" / "a", "1.png")
        _touch(tmp_path / "next" / "b", "1.png")
        with pytest.raises(ConfigError):
            discover_frames(str(tmp_path / "prev" / "*.png"), next=str(tmp_path / "next" / "*" / "*.png"))

    def test_nothing_matches(self, tmp_path):
        with pytest.raises(ConfigError):
            discover_frames(str(tmp_path / "*.png"))

    def test_primary_cannot_be_template(self):
        with pytest.raises(ConfigError):
            discover_frames("prev/{id}.png")

    def test_frame_missing_an_input_fails_alone(self, tmp_path):
        items = [
            ("a", {"primary": tmp_path / "a.png", "next": tmp_path / "a.png"}),
            ("b", {"primary": tmp_path / "b.png", "next": None}),
        ]
        seen = []
        config = build_run_config(jobs=2)
        results = FrameController().run_frames(items, lambda paths: seen.append(paths["primary"].name), config)
        assert isinstance(results[0], Success)
        assert isinstance(results[1], Fail)
        assert results[1].error_type == MissingInputError.__name__
        assert "next" in results[1].msg
        assert seen == ["a.png"]


# ── Run configuration ────────────────────────────────────────────────────────


class TestRunConfig:
    def test_defaults(self):
        config = build_run_config()
        assert config.mode == SynthesisMode.UNION
        assert config.alpha == 0.5
        assert (config.densify.k, config.densify.radius) == (8, 12)
        assert config.report == ReportFormat.CSV
        assert config.crop is None
        assert config.sample_points == 17_500

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("mode: forward\nalpha: 0.25\ndensify:\n  k: 4\n  radius: 6\ncrop: default\n")
        config = build_run_config(path, alpha=0.75, densify_radius=9, mode=None)
        assert config.mode == SynthesisMode.FORWARD
        assert config.alpha == 0.75
        assert (config.densify.k, config.densify.radius) == (4, 9)
        assert config.crop == CropSize(width=1216, height=256)

    def test_crop_string(self):
        assert build_run_config(crop="640x192").crop == CropSize(width=640, height=192)
        with pytest.raises(ConfigError):
            build_run_config(crop="wide")

    def test_invalid_values(self):
        with pytest.raises(ValidationError):
            build_run_config(alpha=1.5)
        with pytest.raises(ValidationError):
            build_run_config(densify_k=0)

    def test_missing_intrinsics_file(self, tmp_path):
        with pytest.raises(ValidationError):
            build_run_config(intrinsics=tmp_path / "nope.txt")

    def test_input_directories_must_exist(self, tmp_path):
        (tmp_path / "prev").mkdir()
        config = build_run_config(prev=str(tmp_path / "prev" / "*.png"), gt=str(tmp_path / "{id}" / "gt.png"))
        assert config.prev.endswith("*.png")
        with pytest.raises(ValidationError):
            build_run_config(next=str(tmp_path / "next" / "*.png"))
        with pytest.raises(ValidationError):
            build_run_config(gt=str(tmp_path / "gt.png"))

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("alpah: 0.25\n")
        with pytest.raises(ValidationError):
            build_run_config(path)

    def test_sampling_can_be_disabled(self):
        assert build_run_config(sample_points=0).sample_points == 0
        with pytest.raises(ValidationError):
            build_run_config(sample_points=-1)

    def test_bad_config_file(self, tmp_path):
        with pytest.raises(ConfigError):
            build_run_config(tmp_path / "missing.yaml")
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            build_run_config(path)


# ── Reports ──────────────────────────────────────────────────────────────────


class TestReports:
    def test_aggregate_mean_and_population_std(self):
        report = report_controller.aggregate([_frame("a", 1.0), _frame("b", 3.0)])
        assert report.summary["rmse"].mean == 2.0
        assert report.summary["rmse"].std == 1.0
        assert report.summary["cd_mean"].count == 0
        assert report.frame_count == 2

    def test_metrics_missing_on_some_frames(self):
        report = report_controller.aggregate([_frame("a", 1.0, cd=0.5), _frame("b", 3.0)])
        assert report.summary["cd_mean"].mean == 0.5
        assert report.summary["cd_mean"].count == 1

    def test_csv_columns_and_mean_row(self, tmp_path):
        report = report_controller.aggregate([_frame("a", 1.0, cd=0.5), _frame("b", 3.0, cd=1.5)])
        path = report_controller.write(report, tmp_path, ReportFormat.CSV)
        with path.open(newline="") as f:
            reader = csv.DictReader(f)
            rows = list(reader)
        assert reader.fieldnames == REPORT_COLUMNS
        assert [r["frame_id"] for r in rows] == ["a", "b", "mean"]
        assert float(rows[-1]["rmse_mm"]) == 2.0
        assert int(rows[-1]["n_valid"]) == 20

    def test_json_report(self, tmp_path):
        report = report_controller.aggregate([_frame("a", 1.0)], stage_ms={"densify": 1.5}, label="x")
        path = report_controller.write(report, tmp_path, ReportFormat.JSON, name="run")
        payload = orjson.loads(path.read_bytes())
        assert path.name == "run.json"
        assert payload["columns"] == REPORT_COLUMNS
        assert payload["summary"]["rmse"]["mean"] == 1.0
        assert payload["stage_ms"] == {"densify": 1.5}

    @pytest.mark.parametrize("fmt", list(ReportFormat))
    def test_load_means_from_either_format(self, tmp_path, fmt):
        report = report_controller.aggregate([_frame("a", 1.0, cd=0.5), _frame("b", 3.0, cd=0.5)])
        means = report_controller.load_means(report_controller.write(report, tmp_path, fmt))
        assert means["rmse"] == 2.0
        assert means["cd_mean"] == 0.5
        assert means["irmse"] is None
