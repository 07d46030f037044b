"""
Pinhole conversions between depth maps and point clouds.

Pixel (u, v) is column u, row v; a depth z at that pixel back-projects to
x = (u - c_u) * z / f_u, y = (v - c_v) * z / f_v. All depths are meters.
"""

import numpy as np

from plinterp.core.exceptions import DimensionError
from plinterp.log import logger
from plinterp.schemas.geometry import CameraIntrinsics, DepthMap, PointCloud
from plinterp.settings import settings
from plinterp.utils.rounding import round_half_up


def back_project(depth: DepthMap, k: CameraIntrinsics) -> PointCloud:
    """One point per valid pixel, in row-major pixel order, with (u, v) recorded as provenance."""
    v, u = np.nonzero(depth.depths > 0)
    z = depth.depths[v, u]
    x = (u - k.c_u) * z / k.f_u
    y = (v - k.c_v) * z / k.f_v
    return PointCloud(
        points=np.stack([x, y, z], axis=1),
        pixel_origin=np.stack([u, v], axis=1),
    )


def rasterize(u: np.ndarray, v: np.ndarray, z: np.ndarray, width: int, height: int) -> DepthMap:
    """
    Z-buffer integer pixel samples into a map: out-of-image samples are dropped and the
    minimum depth wins on collisions.
    """
    inside = (u >= 0) & (u < width) & (v >= 0) & (v < height)
    flat = v[inside] * width + u[inside]
    buf = np.full(width * height, np.inf)
    np.minimum.at(buf, flat, z[inside])
    buf[np.isinf(buf)] = 0.0
    return DepthMap(depths=buf.reshape(height, width))


def project(pc: PointCloud, k: CameraIntrinsics, width: int, height: int) -> DepthMap:
    """
    Render a cloud into a ``width`` x ``height`` depth map. Points with z <= 0 or beyond
    the valid-depth ceiling are discarded, pixel coordinates are rounded half-up.
    """
    if width <= 0 or height <= 0:
        raise DimensionError(f"image size must be positive, got {width}x{height}")
    pts = pc.points
    keep = (pts[:, 2] > 0) & (pts[:, 2] <= settings.MAX_DEPTH_M)
    x, y, z = pts[keep, 0], pts[keep, 1], pts[keep, 2]
    u = round_half_up(k.f_u * x / z + k.c_u)
    v = round_half_up(k.f_v * y / z + k.c_v)
    out = rasterize(u, v, z, width, height)
    logger.debug(f"projected {len(pc)} points onto {out.n_valid} pixels")
    return out


def crop_bottom(depth: DepthMap, target_w: int, target_h: int) -> tuple[DepthMap, tuple[int, int]]:
    """
    Bottom-anchored, horizontally centred window. Returns the crop and its (left, top)
    offsets; apply them to the camera with ``CameraIntrinsics.shifted``.
    """
    if target_w > depth.width or target_h > depth.height:
        raise DimensionError(f"crop {target_w}x{target_h} exceeds map {depth.width}x{depth.height}")
    if target_w <= 0 or target_h <= 0:
        raise DimensionError(f"crop size must be positive, got {target_w}x{target_h}")
    left = (depth.width - target_w) // 2
    top = depth.height - target_h
    window = depth.depths[top : top + target_h, left : left + target_w]
    return DepthMap(depths=window), (left, top)


def check_same_shape(a: DepthMap, b: DepthMap) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"depth maps differ in size: {a.width}x{a.height} vs {b.width}x{b.height}")
