import numpy as np
import pytest
from typer.testing import CliRunner

from plinterp.schemas.geometry import CameraIntrinsics, DepthMap, PointCloud
from plinterp.schemas.scenes import MotionSpec, SyntheticSpec

# small camera used by the synthetic-scene tests: 320x96 image, principal point at the centre
SMALL_K = CameraIntrinsics(f_u=400.0, f_v=400.0, c_u=160.0, c_v=48.0)


def cloud(*points, attributes=None) -> PointCloud:
    return PointCloud(points=np.asarray(points, dtype=np.float64).reshape(-1, 3), attributes=attributes)


def depth_map(rows) -> DepthMap:
    return DepthMap(depths=np.asarray(rows, dtype=np.float64))


def small_spec(**overrides) -> SyntheticSpec:
    fields = dict(width=320, height=96, intrinsics=SMALL_K, sparsity=0.1, seed=0)
    fields.update(overrides)
    return SyntheticSpec(**fields)


def translation(tx: float, ty: float, tz: float) -> MotionSpec:
    return MotionSpec(translation=(tx, ty, tz))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)
