"""
Deterministic temporal interpolation of sparse depth frames.

The intermediate frame is synthesized in 3-D: both input maps are back-projected,
moved along their scene flow, rasterized into the intermediate image and densified
by inverse-distance weighting, then back-projected again. The learned estimator that
would supply the scene flow is replaced by a ``FlowProvider``. Two classical baselines
work on the image plane instead: averaging the two maps and shifting pixels along
optical flow.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

import numpy as np

from plinterp.core import motion
from plinterp.core.exceptions import DimensionError, PlinterpError, SizeMismatchError
from plinterp.core.geometry import back_project, check_same_shape, project, rasterize
from plinterp.core.spatial_index import KdTree
from plinterp.core.timing import stage
from plinterp.io.flow_file import read_scene_flow
from plinterp.log import logger
from plinterp.models.enums import FlowDirection, SynthesisMode
from plinterp.schemas.flow import OpticalFlow, SceneFlow
from plinterp.schemas.geometry import CameraIntrinsics, DepthMap, PointCloud
from plinterp.schemas.runs import DensifyParams
from plinterp.schemas.scenes import MotionSpec
from plinterp.utils.rounding import round_half_up


class FlowProvider(ABC):
    """Source of scene flow for a cloud pair (stands in for a learned estimator)."""

    @abstractmethod
    def estimate(self, source: PointCloud, target: PointCloud, direction: FlowDirection) -> SceneFlow:
        """Flow aligned index-for-index with ``source``, pointing towards ``target``'s frame."""

    def scene_flow(self, source: PointCloud, target: PointCloud, direction: FlowDirection) -> SceneFlow:
        sf = self.estimate(source, target, direction)
        if len(sf) != len(source):
            raise SizeMismatchError(
                f"{type(self).__name__} returned {len(sf)} {direction} flow vectors for {len(source)} points"
            )
        return sf


class ZeroFlowProvider(FlowProvider):
    """Static-scene assumption; the midpoint degenerates to the union of both inputs."""

    def estimate(self, source, target, direction):
        return SceneFlow.zeros(len(source))


class OracleFlowProvider(FlowProvider):
    """Exact flow of a known rigid motion."""

    def __init__(self, spec: MotionSpec):
        self.spec = spec

    def estimate(self, source, target, direction):
        if direction == FlowDirection.FORWARD:
            return SceneFlow(vectors=motion.forward_flow(source.points, self.spec))
        return SceneFlow(vectors=motion.backward_flow(source.points, self.spec))


class FileFlowProvider(FlowProvider):
    """Flows stored as PLSF0001 files, aligned to the back-projected input maps."""

    def __init__(self, forward: Optional[Path] = None, backward: Optional[Path] = None):
        self.paths = {FlowDirection.FORWARD: forward, FlowDirection.BACKWARD: backward}

    def estimate(self, source, target, direction):
        path = self.paths[direction]
        if path is None:
            raise PlinterpError(f"no {direction} flow file configured")
        return read_scene_flow(path)


def warp(pc: PointCloud, sf: SceneFlow, alpha: float) -> PointCloud:
    """Move every point by ``alpha`` times its flow vector; attributes and order are kept."""
    if len(sf) != len(pc):
        raise SizeMismatchError(f"flow has {len(sf)} vectors for {len(pc)} points")
    if not 0.0 <= alpha <= 1.0:
        raise PlinterpError(f"alpha must lie in [0, 1], got {alpha}")
    return pc.with_points(pc.points + alpha * sf.vectors)


def synthesize_midpoint(
    pc_prev: PointCloud,
    pc_next: PointCloud,
    sf_fwd: Optional[SceneFlow],
    sf_bwd: Optional[SceneFlow],
    mode: SynthesisMode = SynthesisMode.UNION,
    alpha: float = 0.5,
) -> PointCloud:
    """
    Cloud at fraction ``alpha`` of the way from t-1 to t+1. Forward warps the previous
    cloud by alpha, backward warps the next cloud by 1 - alpha, union concatenates both.
    """
    parts = []
    if mode in (SynthesisMode.FORWARD, SynthesisMode.UNION):
        if sf_fwd is None:
            raise SizeMismatchError("forward synthesis needs the forward flow")
        parts.append(warp(pc_prev, sf_fwd, alpha))
    if mode in (SynthesisMode.BACKWARD, SynthesisMode.UNION):
        if sf_bwd is None:
            raise SizeMismatchError("backward synthesis needs the backward flow")
        parts.append(warp(pc_next, sf_bwd, 1.0 - alpha))
    out = parts[0]
    for part in parts[1:]:
        out = out.concat(part)
    return out


def warp_depth_by_optical_flow(depth: DepthMap, of: OpticalFlow, alpha: float = 0.5) -> DepthMap:
    """
    Shift each valid pixel by alpha times its optical flow (rounded half-up), keeping its
    depth value unchanged; the nearest depth wins on collisions and pixels leaving the
    image are dropped.
    """
    if (of.height, of.width) != depth.shape:
        raise DimensionError(f"optical flow {of.width}x{of.height} does not match map {depth.width}x{depth.height}")
    v, u = np.nonzero(depth.depths > 0)
    nu = round_half_up(u + alpha * of.vectors[v, u, 0])
    nv = round_half_up(v + alpha * of.vectors[v, u, 1])
    return rasterize(nu, nv, depth.depths[v, u], depth.width, depth.height)


def merge_nearest(a: DepthMap, b: DepthMap) -> DepthMap:
    """Per pixel: the smaller depth where both are valid, otherwise whichever is valid."""
    check_same_shape(a, b)
    da, db = a.depths, b.depths
    both = (da > 0) & (db > 0)
    out = np.where(da > 0, da, db)
    out = np.where(both, np.minimum(da, db), out)
    return DepthMap(depths=out)


def average_baseline(d_prev: DepthMap, d_next: DepthMap) -> DepthMap:
    """Mean where both maps are valid, the valid value where only one is, 0 elsewhere."""
    check_same_shape(d_prev, d_next)
    a, b = d_prev.depths, d_next.depths
    va, vb = a > 0, b > 0
    out = np.where(va & vb, (a + b) / 2.0, np.where(va, a, b))
    return DepthMap(depths=out)


def densify(sparse: DepthMap, k: int, radius: float) -> DepthMap:
    """
    Fill each invalid pixel with the inverse-distance-weighted mean of its (up to) ``k``
    nearest valid pixels within ``radius`` pixels. Valid pixels are kept; pixels without
    a valid neighbour in range stay 0. Each filled value is clamped to the range of its
    contributors.
    """
    if k < 1 or radius < 1:
        raise PlinterpError(f"densify needs k >= 1 and radius >= 1, got k={k}, radius={radius}")
    depths = sparse.depths
    vv, vu = np.nonzero(depths > 0)
    hv, hu = np.nonzero(depths == 0)
    if len(vv) == 0 or len(hv) == 0:
        return sparse

    values = depths[vv, vu]
    tree = KdTree.from_array(np.stack([vu, vv], axis=1).astype(np.float64))
    queries = np.stack([hu, hv], axis=1).astype(np.float64)
    idx, d2, counts = tree.knn_many(queries, k, radius)

    found = idx >= 0
    z = np.where(found, values[np.where(found, idx, 0)], 0.0)
    w = np.where(found, 1.0 / np.sqrt(np.where(found, d2, 1.0)), 0.0)
    filled = counts > 0
    wsum = w.sum(axis=1)
    est = np.zeros(len(hv))
    est[filled] = (w[filled] * z[filled]).sum(axis=1) / wsum[filled]
    zmin = np.where(found, z, np.inf).min(axis=1)
    zmax = np.where(found, z, -np.inf).max(axis=1)
    est[filled] = np.clip(est[filled], zmin[filled], zmax[filled])

    out = depths.copy()
    out[hv, hu] = est
    logger.debug(f"densify filled {int(filled.sum())} of {len(hv)} holes (k={k}, radius={radius})")
    return DepthMap(depths=out)


def sample_indices(n: int, count: Optional[int], seed: int) -> np.ndarray:
    """Sorted uniform subset of ``range(n)`` of size ``count`` (everything when count is None or >= n)."""
    if count is None or count >= n:
        return np.arange(n)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n, size=count, replace=False))


def sample_cloud(pc: PointCloud, count: Optional[int], seed: int) -> tuple[PointCloud, np.ndarray]:
    """Uniform subsample without replacement; also returns the kept indices for aligned data."""
    idx = sample_indices(len(pc), count, seed)
    return pc.take(idx), idx


def interpolate_frame(
    d_prev: DepthMap,
    d_next: DepthMap,
    provider: FlowProvider,
    k: CameraIntrinsics,
    mode: SynthesisMode = SynthesisMode.UNION,
    densify_params: DensifyParams = DensifyParams(),
    alpha: float = 0.5,
    sample_points: Optional[int] = None,
    seed: int = 0,
) -> tuple[DepthMap, PointCloud]:
    """
    Full pipeline: back-project both maps, obtain flows, synthesize the intermediate cloud,
    rasterize it into the image, densify, and back-project the dense map.
    Returns:
        (dense intermediate depth map, Pseudo-LiDAR cloud)
    """
    check_same_shape(d_prev, d_next)
    with stage("back_project"):
        pc_prev = back_project(d_prev, k)
        pc_next = back_project(d_next, k)

    sf_fwd = sf_bwd = None
    with stage("flow"):
        if mode in (SynthesisMode.FORWARD, SynthesisMode.UNION):
            sf_fwd = provider.scene_flow(pc_prev, pc_next, FlowDirection.FORWARD)
        if mode in (SynthesisMode.BACKWARD, SynthesisMode.UNION):
            sf_bwd = provider.scene_flow(pc_next, pc_prev, FlowDirection.BACKWARD)

    if sample_points is not None:
        pc_prev, idx = sample_cloud(pc_prev, sample_points, seed)
        sf_fwd = sf_fwd.take(idx) if sf_fwd is not None else None
        pc_next, idx = sample_cloud(pc_next, sample_points, seed + 1)
        sf_bwd = sf_bwd.take(idx) if sf_bwd is not None else None

    with stage("synthesize"):
        mid = synthesize_midpoint(pc_prev, pc_next, sf_fwd, sf_bwd, mode, alpha)
        sparse_t = project(mid, k, d_prev.width, d_prev.height)
    with stage("densify"):
        dense_t = densify(sparse_t, densify_params.k, densify_params.radius)
    with stage("back_project"):
        cloud = back_project(dense_t, k)
    logger.debug(f"interpolated {len(mid)} warped points -> {sparse_t.n_valid} sparse -> {dense_t.n_valid} dense")
    return dense_t, cloud


def average_frame(
    d_prev: DepthMap,
    d_next: DepthMap,
    k: CameraIntrinsics,
    densify_params: DensifyParams = DensifyParams(),
) -> tuple[DepthMap, PointCloud]:
    """Averaging baseline through the same densify and back-projection stages."""
    with stage("synthesize"):
        sparse_t = average_baseline(d_prev, d_next)
    with stage("densify"):
        dense_t = densify(sparse_t, densify_params.k, densify_params.radius)
    with stage("back_project"):
        cloud = back_project(dense_t, k)
    return dense_t, cloud


def optical_flow_frame(
    d_prev: DepthMap,
    d_next: DepthMap,
    of_fwd: OpticalFlow,
    of_bwd: OpticalFlow,
    k: CameraIntrinsics,
    densify_params: DensifyParams = DensifyParams(),
    alpha: float = 0.5,
) -> tuple[DepthMap, PointCloud]:
    """Optical-flow baseline: shift both maps on the image plane, merge, densify, back-project."""
    with stage("synthesize"):
        sparse_t = merge_nearest(
            warp_depth_by_optical_flow(d_prev, of_fwd, alpha),
            warp_depth_by_optical_flow(d_next, of_bwd, 1.0 - alpha),
        )
    with stage("densify"):
        dense_t = densify(sparse_t, densify_params.k, densify_params.radius)
    with stage("back_project"):
        cloud = back_project(dense_t, k)
    return dense_t, cloud
