"""End-to-end runs of the command-line harness on small synthetic data."""

import csv
from pathlib import Path

import numpy as np
import orjson
import pytest

from plinterp import app
from plinterp.controllers import baseline_controller
from plinterp.io import read_depth_png, write_depth_png
from plinterp.schemas.bench import BENCH_COLUMNS
from plinterp.schemas.geometry import DepthMap
from plinterp.schemas.metrics import REPORT_COLUMNS
from plinterp.settings import settings

WIDTH, HEIGHT = 64, 32


# ── Helpers ──────────────────────────────────────────────────────────────────


def _invoke(runner, *args):
    return runner.invoke(app, [str(a) for a in args])


def _intrinsics(tmp_path: Path) -> Path:
    path = tmp_path / "k.txt"
    path.write_text("fu 64\nfv 64\ncu 32\ncv 16\n")
    return path


def _synth(runner, tmp_path: Path, name: str = "synth", translation: str = "0,0,1", frames: int = 2) -> Path:
    out = tmp_path / name
    result = _invoke(
        runner,
        "synth",
        "-o", out,
        "-n", frames,
        "--width", WIDTH,
        "--height", HEIGHT,
        "--layout", "wall",
        "--translation", translation,
        "--sparsity", 0.1,
        "--seed", 1,
        "--intrinsics", _intrinsics(tmp_path),
    )  # fmt: skip
    assert result.exit_code == 0, result.output
    return out


def _rows(path: Path) -> list[dict]:
    with path.open(newline="") as f:
        return list(csv.DictReader(f))


def _constant_map(path: Path, value: float) -> Path:
    return write_depth_png(DepthMap(depths=np.full((4, 8), value)), path)


# ── synth ────────────────────────────────────────────────────────────────────


class TestSynth:
    def test_layout_of_outputs(self, runner, tmp_path):
        out = _synth(runner, tmp_path)
        for kind, ext in [("prev", "png"), ("gt", "png"), ("flow_fwd", "plsf"), ("optical_bwd", "plof")]:
            assert (out / kind / f"000001.{ext}").is_file()
        assert (out / "intrinsics.txt").is_file()
        assert (out / "scene.yaml").is_file()

    def test_zero_motion_gives_identical_maps(self, runner, tmp_path):
        out = _synth(runner, tmp_path, translation="0,0,0", frames=1)
        prev = (out / "prev" / "000000.png").read_bytes()
        assert (out / "mid" / "000000.png").read_bytes() == prev
        assert (out / "next" / "000000.png").read_bytes() == prev

    def test_rerun_is_byte_identical(self, runner, tmp_path):
        a = _synth(runner, tmp_path, "a")
        b = _synth(runner, tmp_path, "b")
        files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
        assert files
        for rel in files:
            assert (a / rel).read_bytes() == (b / rel).read_bytes(), rel

    def test_sparsity(self, runner, tmp_path):
        out = _synth(runner, tmp_path, frames=1)
        d = read_depth_png(out / "prev" / "000000.png")
        assert abs(d.n_valid / (WIDTH * HEIGHT) - 0.1) <= 0.005

    def test_bad_vector(self, runner, tmp_path):
        result = _invoke(runner, "synth", "-o", tmp_path / "s", "--translation", "1,2")
        assert result.exit_code == 2

    def test_scene_file_replays_the_run(self, runner, tmp_path):
        a = _synth(runner, tmp_path, "a")
        result = _invoke(runner, "synth", "--config", a / "scene.yaml", "-o", tmp_path / "b")
        assert result.exit_code == 0, result.output
        for rel in sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file()):
            assert (a / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel

    def test_flags_override_config_file(self, runner, tmp_path):
        path = tmp_path / "synth.yaml"
        path.write_text(
            f"frames: 3\nwidth: {WIDTH}\nheight: {HEIGHT}\nlayout: wall\nintrinsics: {_intrinsics(tmp_path)}\n"
            "motion:\n  translation: [0, 0, 1]\n"
        )
        result = _invoke(runner, "synth", "--config", path, "-n", 1, "-o", tmp_path / "s")
        assert result.exit_code == 0, result.output
        assert sorted(p.name for p in (tmp_path / "s" / "prev").iterdir()) == ["000000.png"]
        assert read_depth_png(tmp_path / "s" / "gt" / "000000.png").shape == (HEIGHT, WIDTH)

    def test_unknown_config_key(self, runner, tmp_path):
        path = tmp_path / "synth.yaml"
        path.write_text("frames: 1\nwidht: 64\n")
        assert _invoke(runner, "synth", "--config", path, "-o", tmp_path / "s").exit_code == 2


# ── interpolate ──────────────────────────────────────────────────────────────


class TestInterpolate:
    def _run(self, runner, data: Path, out: Path, *extra):
        return _invoke(
            runner,
            "interpolate",
            "--prev", data / "prev" / "*.png",
            "--next", data / "next" / "*.png",
            "--flow-fwd", data / "flow_fwd" / "*.plsf",
            "--flow-bwd", data / "flow_bwd" / "*.plsf",
            "--gt", data / "gt" / "{id}.png",
            "--intrinsics", data / "intrinsics.txt",
            "-o", out,
            *extra,
        )  # fmt: skip

    def test_writes_outputs_and_report(self, runner, tmp_path):
        data = _synth(runner, tmp_path)
        result = self._run(runner, data, tmp_path / "run", "--jobs", 2, "--ply")
        assert result.exit_code == 0, result.output

        rows = _rows(tmp_path / "run" / "report.csv")
        assert list(rows[0]) == REPORT_COLUMNS
        assert [r["frame_id"] for r in rows] == ["000000", "000001", "mean"]
        # exact flows on a translated wall recover the midpoint
        assert float(rows[-1]["rmse_mm"]) < 1.0
        for sub, ext in [("depth", "png"), ("cloud", "bin"), ("ply", "ply")]:
            assert (tmp_path / "run" / sub / f"000001.{ext}").is_file()

    def test_deterministic(self, runner, tmp_path):
        data = _synth(runner, tmp_path)
        assert self._run(runner, data, tmp_path / "a", "--jobs", 1).exit_code == 0
        assert self._run(runner, data, tmp_path / "b", "--jobs", 2).exit_code == 0
        for sub in ("depth/000000.png", "cloud/000001.bin"):
            assert (tmp_path / "a" / sub).read_bytes() == (tmp_path / "b" / sub).read_bytes()

    def test_json_report(self, runner, tmp_path):
        data = _synth(runner, tmp_path, frames=1)
        assert self._run(runner, data, tmp_path / "run", "--report", "json").exit_code == 0
        assert (tmp_path / "run" / "report.json").is_file()

    def test_missing_flow_file_fails_the_frame(self, runner, tmp_path):
        data = _synth(runner, tmp_path)
        (data / "flow_bwd" / "000001.plsf").unlink()
        result = _invoke(
            runner,
            "interpolate",
            "--prev", data / "prev" / "*.png",
            "--next", data / "next" / "*.png",
            "--flow-fwd", data / "flow_fwd" / "{id}.plsf",
            "--flow-bwd", data / "flow_bwd" / "{id}.plsf",
            "--intrinsics", data / "intrinsics.txt",
            "-o", tmp_path / "run",
        )  # fmt: skip
        assert result.exit_code == 1
        assert [r["frame_id"] for r in _rows(tmp_path / "run" / "report.csv")] == ["000000", "mean"]

    def test_glob_without_a_match_fails_only_that_frame(self, runner, tmp_path):
        data = _synth(runner, tmp_path)
        (data / "flow_bwd" / "000001.plsf").unlink()
        result = self._run(runner, data, tmp_path / "run")
        assert result.exit_code == 1
        assert "flow-bwd" in result.stderr
        assert [r["frame_id"] for r in _rows(tmp_path / "run" / "report.csv")] == ["000000", "mean"]
        assert (tmp_path / "run" / "depth" / "000000.png").is_file()
        assert not (tmp_path / "run" / "depth" / "000001.png").exists()

    def test_missing_inputs_is_a_config_error(self, runner, tmp_path):
        result = _invoke(runner, "interpolate", "--intrinsics", _intrinsics(tmp_path), "-o", tmp_path / "run")
        assert result.exit_code == 2
        assert "--prev" in result.stderr

    def test_flows_cannot_be_cropped(self, runner, tmp_path):
        data = _synth(runner, tmp_path, frames=1)
        assert self._run(runner, data, tmp_path / "run", "--crop", "32x16").exit_code == 2


# ── evaluate / baseline / summarize ──────────────────────────────────────────


class TestEvaluate:
    def test_prediction_equal_to_gt_scores_zero(self, runner, tmp_path):
        data = _synth(runner, tmp_path)
        gt = data / "gt" / "*.png"
        result = _invoke(
            runner, "evaluate", "--pred", gt, "--gt", gt, "--intrinsics", data / "intrinsics.txt", "-o", tmp_path / "ev"
        )
        assert result.exit_code == 0, result.output
        mean = _rows(tmp_path / "ev" / "report.csv")[-1]
        for column in ("rmse_mm", "mae_mm", "irmse_per_km", "imae_per_km", "cd_mean_m2", "cd_sum_m2"):
            assert float(mean[column]) == 0.0

    def test_frame_count_mismatch(self, runner, tmp_path):
        data = _synth(runner, tmp_path)
        result = _invoke(
            runner,
            "evaluate",
            "--pred", data / "gt" / "*.png",
            "--gt", data / "gt" / "000000.png",
            "--intrinsics", data / "intrinsics.txt",
            "-o", tmp_path / "ev",
        )  # fmt: skip
        assert result.exit_code == 2
        assert not (tmp_path / "ev" / "report.csv").exists()


class TestBaseline:
    def test_average_of_constant_maps(self, runner, tmp_path):
        _constant_map(tmp_path / "prev" / "f.png", 4.0)
        _constant_map(tmp_path / "next" / "f.png", 6.0)
        _constant_map(tmp_path / "gt" / "f.png", 5.0)
        result = _invoke(
            runner,
            "baseline", "average",
            "--prev", tmp_path / "prev" / "*.png",
            "--next", tmp_path / "next" / "*.png",
            "--gt", tmp_path / "gt" / "*.png",
            "--intrinsics", _intrinsics(tmp_path),
            "-o", tmp_path / "avg",
        )  # fmt: skip
        assert result.exit_code == 0, result.output
        assert np.all(read_depth_png(tmp_path / "avg" / "depth" / "f.png").depths == 5.0)
        assert float(_rows(tmp_path / "avg" / "report.csv")[-1]["rmse_mm"]) == 0.0

    def test_label_is_per_run(self, runner, tmp_path):
        _constant_map(tmp_path / "prev" / "f.png", 4.0)
        _constant_map(tmp_path / "next" / "f.png", 6.0)
        result = _invoke(
            runner,
            "baseline", "average",
            "--prev", tmp_path / "prev" / "*.png",
            "--next", tmp_path / "next" / "*.png",
            "--intrinsics", _intrinsics(tmp_path),
            "--report", "json",
            "-o", tmp_path / "avg",
        )  # fmt: skip
        assert result.exit_code == 0, result.output
        assert orjson.loads((tmp_path / "avg" / "report.json").read_bytes())["label"] == "baseline-average"
        assert baseline_controller.label == ""

    def test_optical_flow_baseline_runs_on_synthetic_data(self, runner, tmp_path):
        data = _synth(runner, tmp_path)
        result = _invoke(
            runner,
            "baseline", "optical-flow",
            "--prev", data / "prev" / "*.png",
            "--next", data / "next" / "*.png",
            "--optical-fwd", data / "optical_fwd" / "*.plof",
            "--optical-bwd", data / "optical_bwd" / "*.plof",
            "--gt", data / "gt" / "*.png",
            "--intrinsics", data / "intrinsics.txt",
            "-o", tmp_path / "of",
        )  # fmt: skip
        assert result.exit_code == 0, result.output
        # pixel shifts cannot change depth, so the 0.5 m step towards the midpoint is missed
        assert float(_rows(tmp_path / "of" / "report.csv")[-1]["mae_mm"]) > 100.0

    def test_optical_flow_needs_flows(self, runner, tmp_path):
        _constant_map(tmp_path / "prev" / "f.png", 4.0)
        result = _invoke(
            runner,
            "baseline", "optical-flow",
            "--prev", tmp_path / "prev" / "*.png",
            "--next", tmp_path / "prev" / "*.png",
            "--intrinsics", _intrinsics(tmp_path),
        )  # fmt: skip
        assert result.exit_code == 2


class TestSummarize:
    def test_table_of_two_runs(self, runner, tmp_path):
        for name, value in [("a", 4.0), ("b", 5.0)]:
            _constant_map(tmp_path / name / "p.png", value)
            result = _invoke(
                runner,
                "evaluate",
                "--pred", tmp_path / name / "*.png",
                "--gt", tmp_path / "a" / "p.png",
                "--intrinsics", _intrinsics(tmp_path),
                "-o", tmp_path / f"run_{name}",
            )  # fmt: skip
            assert result.exit_code == 0, result.output
        result = _invoke(runner, "summarize", tmp_path / "run_a" / "report.csv", tmp_path / "run_b" / "report.csv")
        assert result.exit_code == 0, result.output
        assert "run_a" in result.stdout
        assert "1000" in result.stdout


# ── bench ────────────────────────────────────────────────────────────────────


class TestBench:
    def test_csv_output(self, runner, tmp_path):
        result = _invoke(runner, "bench", 200, 400, "--repeats", 5, "--csv", "--output", tmp_path / "bench.csv")
        assert result.exit_code == 0, result.output
        lines = result.stdout.strip().splitlines()
        assert lines[0] == ",".join(BENCH_COLUMNS)
        assert [line.split(",")[0] for line in lines[1:]] == ["200", "400"]
        assert (tmp_path / "bench.csv").read_text().strip() == result.stdout.strip()

    def test_brute_force_skipped_above_limit(self, runner):
        result = _invoke(runner, "bench", 300, "--brute-max", 100, "--csv")
        assert result.exit_code == 0, result.output
        row = dict(zip(BENCH_COLUMNS, result.stdout.strip().splitlines()[1].split(",")))
        assert row["chamfer_brute_ms"] == ""

    @pytest.mark.parametrize("args", [["100", "--repeats", "3"], ["0"]])
    def test_invalid_arguments(self, runner, args):
        assert _invoke(runner, "bench", *args).exit_code == 2

    def test_config_file_and_override(self, runner, tmp_path):
        path = tmp_path / "bench.yaml"
        path.write_text("sizes: [200]\nrepeats: 5\nbrute_max: 100\n")
        result = _invoke(runner, "bench", "--config", path, "--csv")
        assert result.exit_code == 0, result.output
        row = dict(zip(BENCH_COLUMNS, result.stdout.strip().splitlines()[1].split(",")))
        assert (row["n"], row["chamfer_brute_ms"]) == ("200", "")
        result = _invoke(runner, "bench", 150, "--config", path, "--csv")
        assert [line.split(",")[0] for line in result.stdout.strip().splitlines()[1:]] == ["150"]

    def test_no_sizes(self, runner):
        assert _invoke(runner, "bench").exit_code == 2


# ── app ──────────────────────────────────────────────────────────────────────


class TestApp:
    def test_version(self, runner):
        result = _invoke(runner, "--version")
        assert result.exit_code == 0
        assert result.stdout.strip() == f"{settings.APP_TITLE} {settings.VERSION}"
