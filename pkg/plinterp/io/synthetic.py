"""
Synthetic frame triples with known rigid motion.

The scene is built at t-1 from planes and axis-aligned boxes and moved by a fraction of
the motion for t (0.5) and t+1 (1.0). Every frame is ray-cast through the pixel centres,
so a rendered map back-projects exactly onto its cloud. One seeded scan pattern masks
all three frames, as a sensor-fixed LiDAR beam layout would.
"""

from dataclasses import dataclass

import numpy as np

from plinterp.core import motion as rigid
from plinterp.core.geometry import back_project
from plinterp.log import logger
from plinterp.models.enums import FlowDirection, SceneLayout
from plinterp.schemas.flow import OpticalFlow, SceneFlow
from plinterp.schemas.geometry import CameraIntrinsics, DepthMap, PointCloud
from plinterp.schemas.scenes import MotionSpec, SyntheticScene, SyntheticSpec
from plinterp.settings import settings


@dataclass(frozen=True)
class Plane:
    normal: np.ndarray
    offset: float  # normal . x = offset


@dataclass(frozen=True)
class Box:
    lo: np.ndarray
    hi: np.ndarray


def build_layout(spec: SyntheticSpec) -> tuple[list[Plane], list[Box]]:
    """Primitives of the scene at t-1, in camera coordinates (x right, y down, z forward)."""
    wall = Plane(normal=np.array([0.0, 0.0, 1.0]), offset=spec.wall_depth)
    if spec.layout == SceneLayout.WALL:
        return [wall], []

    ground = Plane(normal=np.array([0.0, 1.0, 0.0]), offset=spec.camera_height)
    rng = np.random.default_rng([spec.seed, 0])
    if spec.wall_depth > 16.0:
        near, far = 10.0, spec.wall_depth - 6.0
    else:
        near, far = 0.4 * spec.wall_depth, 0.8 * spec.wall_depth
    boxes = []
    for _ in range(spec.n_boxes):
        cx, cz = rng.uniform(-6.0, 6.0), rng.uniform(near, far)
        w, h, depth = rng.uniform(1.5, 2.5), rng.uniform(1.2, 2.0), rng.uniform(2.0, 4.5)
        boxes.append(
            Box(
                lo=np.array([cx - w / 2, spec.camera_height - h, cz - depth / 2]),
                hi=np.array([cx + w / 2, spec.camera_height, cz + depth / 2]),
            )
        )
    return [wall, ground], boxes


def pixel_rays(k: CameraIntrinsics, width: int, height: int) -> np.ndarray:
    """Unit-z ray direction through every pixel centre, row-major, shape (H*W, 3)."""
    v, u = np.mgrid[0:height, 0:width]
    u = u.ravel().astype(np.float64)
    v = v.ravel().astype(np.float64)
    return np.stack([(u - k.c_u) / k.f_u, (v - k.c_v) / k.f_v, np.ones_like(u)], axis=1)


def _hit_plane(o: np.ndarray, d: np.ndarray, plane: Plane) -> np.ndarray:
    denom = d @ plane.normal
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (plane.offset - o @ plane.normal) / denom
    return np.where((denom != 0) & (t > 0), t, np.inf)


def _hit_box(o: np.ndarray, d: np.ndarray, box: Box) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / d
        t1 = (box.lo - o) * inv
        t2 = (box.hi - o) * inv
    t_near = np.fmax.reduce(np.fmin(t1, t2), axis=1)
    t_far = np.fmin.reduce(np.fmax(t1, t2), axis=1)
    return np.where((t_far >= t_near) & (t_near > 0), t_near, np.inf)


def render(
    planes: list[Plane], boxes: list[Box], spec: SyntheticSpec, motion: MotionSpec, fraction: float
) -> DepthMap:
    """
    Dense depth map of the scene moved by ``fraction`` of ``motion``. Rays are taken into
    the scene's t-1 frame by the inverse pose, which preserves the ray parameter, and
    since the camera rays have unit z the parameter of the nearest hit is the depth.
    """
    rays = pixel_rays(spec.intrinsics, spec.width, spec.height)
    origin = rigid.inverse_pose(np.zeros((1, 3)), motion, fraction)
    dirs = rays @ rigid.rotation_matrix(motion, fraction)

    t = np.full(len(rays), np.inf)
    for plane in planes:
        t = np.minimum(t, _hit_plane(origin, dirs, plane))
    for box in boxes:
        t = np.minimum(t, _hit_box(origin, dirs, box))
    t[~np.isfinite(t) | (t > settings.MAX_DEPTH_M)] = 0.0
    return DepthMap(depths=t.reshape(spec.height, spec.width))


def scan_pattern(spec: SyntheticSpec) -> np.ndarray:
    """Boolean (H, W) mask with exactly round(sparsity * H * W) pixels set (at least one)."""
    n = spec.width * spec.height
    count = max(1, int(np.floor(spec.sparsity * n + 0.5)))
    rng = np.random.default_rng([spec.seed, 1])
    mask = np.zeros(n, dtype=bool)
    mask[rng.choice(n, size=count, replace=False)] = True
    return mask.reshape(spec.height, spec.width)


def _masked(depth: DepthMap, mask: np.ndarray) -> DepthMap:
    return DepthMap(depths=np.where(mask, depth.depths, 0.0))


def generate_synthetic(spec: SyntheticSpec) -> SyntheticScene:
    planes, boxes = build_layout(spec)
    m = spec.motion
    dense = [render(planes, boxes, spec, m, s) for s in (0.0, 0.5, 1.0)]
    clouds = [back_project(d, spec.intrinsics) for d in dense]
    mask = scan_pattern(spec)
    mask.setflags(write=False)
    sparse = [_masked(d, mask) for d in dense]
    logger.debug(
        f"synthetic {spec.layout} scene {spec.width}x{spec.height}: "
        f"{[c.points.shape[0] for c in clouds]} dense points, {[s.n_valid for s in sparse]} sparse"
    )
    return SyntheticScene(
        spec=spec,
        cloud_prev=clouds[0],
        cloud_mid=clouds[1],
        cloud_next=clouds[2],
        flow_fwd=SceneFlow(vectors=rigid.forward_flow(clouds[0].points, m)),
        flow_bwd=SceneFlow(vectors=rigid.backward_flow(clouds[2].points, m)),
        sparse_prev=sparse[0],
        sparse_mid=sparse[1],
        sparse_next=sparse[2],
        dense_mid=dense[1],
        scan_mask=mask,
    )


def optical_flow_from_motion(
    pc: PointCloud,
    k: CameraIntrinsics,
    motion: MotionSpec,
    direction: FlowDirection,
    width: int,
    height: int,
) -> OpticalFlow:
    """
    Exact image-plane motion of every pixel a cloud came from (its ``pixel_origin``):
    the projection of the moved point minus the pixel itself, unrounded. Pixels with no
    point, or whose point ends up behind the camera, carry zero flow.
    """
    of = np.zeros((height, width, 2))
    if pc.pixel_origin is None or len(pc) == 0:
        return OpticalFlow(vectors=of)
    if direction == FlowDirection.FORWARD:
        moved = pc.points + rigid.forward_flow(pc.points, motion)
    else:
        moved = pc.points + rigid.backward_flow(pc.points, motion)
    u, v = pc.pixel_origin[:, 0], pc.pixel_origin[:, 1]
    ahead = moved[:, 2] > 0
    z = np.where(ahead, moved[:, 2], 1.0)
    du = np.where(ahead, k.f_u * moved[:, 0] / z + k.c_u - u, 0.0)
    dv = np.where(ahead, k.f_v * moved[:, 1] / z + k.c_v - v, 0.0)
    of[v, u, 0] = du
    of[v, u, 1] = dv
    return OpticalFlow(vectors=of)
