"""
Larger randomized sweeps and timing checks. Deselect with ``-m "not slow"``.

The KITTI check runs only when ``PLINTERP_KITTI_DIR`` points at a directory holding
``prev/``, ``next/`` and ``gt/`` depth PNGs in the same sorted order.
"""

import itertools
import os
import time
from pathlib import Path

import numpy as np
import pytest

from plinterp.controllers.bench import bench_controller
from plinterp.core.geometry import back_project, crop_bottom, project
from plinterp.core.interpolation import average_baseline
from plinterp.core.losses import reconstruction_loss, reconstruction_loss_grad
from plinterp.core.metrics import chamfer, chamfer_directional, chamfer_directional_brute, depth_metrics, emd_exact
from plinterp.core.spatial_index import build, nearest_brute_many
from plinterp.io import (
    read_cloud_bin,
    read_depth_png,
    read_scene_flow,
    write_cloud_bin,
    write_depth_png,
    write_scene_flow,
)
from plinterp.io.depth_png import decode_depth
from plinterp.schemas.flow import SceneFlow
from plinterp.schemas.geometry import CameraIntrinsics, PointCloud

pytestmark = pytest.mark.slow

KITTI_DIR = os.environ.get("PLINTERP_KITTI_DIR")


class TestSweeps:
    def test_round_trip_timing(self):
        rng = np.random.default_rng(0)
        k = CameraIntrinsics(f_u=721.5377, f_v=721.5377, c_u=609.5593, c_v=172.854)
        flat = rng.choice(1242 * 375, size=10_000, replace=False)
        v, u = np.divmod(flat, 1242)
        z = rng.uniform(0.5, 150.0, size=len(flat))
        pts = np.column_stack([(u - k.c_u) * z / k.f_u, (v - k.c_v) * z / k.f_v, z])

        start = time.perf_counter()
        back = back_project(project(PointCloud(points=pts), k, 1242, 375), k)
        assert time.perf_counter() - start < 5.0
        np.testing.assert_allclose(back.points, pts[np.lexsort((u, v))], rtol=1e-6)

    def test_indexed_search_equals_brute_force(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = int(rng.integers(1, 5_001))
            pts = rng.normal(scale=rng.uniform(0.1, 50.0), size=(n, 3))
            queries = rng.normal(scale=50.0, size=(64, 3))
            idx, d2 = build(PointCloud(points=pts), leaf_size=int(rng.integers(1, 33))).nearest_many(queries)
            bidx, bd2 = nearest_brute_many(pts, queries)
            np.testing.assert_array_equal(idx, bidx)
            assert d2.tobytes() == bd2.tobytes()

    def test_chamfer_indexed_equals_brute_force(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a = PointCloud(points=rng.uniform(-30, 30, size=(int(rng.integers(1, 3_000)), 3)))
            b = PointCloud(points=rng.uniform(-30, 30, size=(int(rng.integers(1, 3_000)), 3)))
            assert chamfer_directional(a, b) == pytest.approx(chamfer_directional_brute(a, b), rel=1e-9)

    def test_emd_matches_exhaustive_search(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(1, 8))
            a = rng.normal(size=(n, 3))
            b = rng.normal(size=(n, 3))
            dist = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2))
            best = min(dist[np.arange(n), list(p)].sum() for p in itertools.permutations(range(n)))
            assert emd_exact(PointCloud(points=a), PointCloud(points=b)) == pytest.approx(best, rel=1e-12, abs=1e-12)

    def test_gradient_checks(self):
        rng = np.random.default_rng(4)
        trials = 0
        while trials < 100:
            pred = rng.normal(size=(64, 3))
            gt = rng.normal(size=(64, 3))
            if _min_gap(pred, gt) < 1e-3 or _min_gap(gt, pred) < 1e-3:
                continue
            trials += 1
            p_pc, g_pc = PointCloud(points=pred), PointCloud(points=gt)
            analytic = reconstruction_loss_grad(p_pc, g_pc)
            numeric = _central_difference(pred, g_pc, 1e-5)
            assert np.abs(analytic - numeric).max() / np.abs(analytic).max() < 1e-5
            stepped = PointCloud(points=pred - 1e-3 * analytic)
            assert reconstruction_loss(stepped, g_pc) < reconstruction_loss(p_pc, g_pc)

    def test_io_round_trips(self, tmp_path):
        rng = np.random.default_rng(5)
        for i in range(100):
            stored = rng.integers(0, 51_201, size=(9, 13)).astype(np.uint16)
            png = write_depth_png(decode_depth(stored), tmp_path / f"{i}.png")
            assert write_depth_png(read_depth_png(png), tmp_path / "again.png").read_bytes() == png.read_bytes()

            pc = PointCloud(points=rng.normal(size=(50, 3)).astype(np.float32), attributes=rng.uniform(size=50))
            bin_path = write_cloud_bin(pc, tmp_path / f"{i}.bin")
            again = write_cloud_bin(read_cloud_bin(bin_path), tmp_path / "again.bin")
            assert again.read_bytes() == bin_path.read_bytes()

            sf = SceneFlow(vectors=rng.normal(size=(50, 3)).astype(np.float32))
            flow = write_scene_flow(sf, tmp_path / f"{i}.plsf")
            assert write_scene_flow(read_scene_flow(flow), tmp_path / "again.plsf").read_bytes() == flow.read_bytes()


class TestPerformance:
    def test_chamfer_of_100k_clouds_under_a_second(self):
        bench_controller.warm_up()
        a, b = bench_controller.clouds(100_000, seed=0)
        start = time.perf_counter()
        chamfer(a, b)
        assert time.perf_counter() - start < 1.0

    def test_indexed_beats_brute_force_tenfold(self):
        rows = bench_controller.run([50_000], repeats=5)
        assert rows[0].speedup >= 10.0


@pytest.mark.skipif(not KITTI_DIR, reason="PLINTERP_KITTI_DIR not set")
class TestKitti:
    def test_average_baseline_rmse_order_of_magnitude(self):
        root = Path(KITTI_DIR)
        prev, nxt, gt = (sorted((root / sub).glob("*.png")) for sub in ("prev", "next", "gt"))
        assert len(prev) == len(nxt) == len(gt) > 0
        rmse = []
        for p, n, g in zip(prev, nxt, gt):
            maps = [crop_bottom(read_depth_png(path), 1216, 256)[0] for path in (p, n, g)]
            rmse.append(depth_metrics(average_baseline(maps[0], maps[1]), maps[2]).rmse)
        assert 6_000.0 <= float(np.mean(rmse)) <= 20_000.0


# ── Helpers ──────────────────────────────────────────────────────────────────


def _min_gap(src: np.ndarray, dst: np.ndarray) -> float:
    d = np.sqrt(((src[:, None, :] - dst[None, :, :]) ** 2).sum(axis=2))
    d.sort(axis=1)
    return float((d[:, 1] - d[:, 0]).min())


def _central_difference(pred: np.ndarray, gt: PointCloud, h: float) -> np.ndarray:
    grad = np.zeros_like(pred)
    for i, a in np.ndindex(pred.shape):
        plus, minus = pred.copy(), pred.copy()
        plus[i, a] += h
        minus[i, a] -= h
        up = reconstruction_loss(PointCloud(points=plus), gt)
        down = reconstruction_loss(PointCloud(points=minus), gt)
        grad[i, a] = (up - down) / (2 * h)
    return grad
