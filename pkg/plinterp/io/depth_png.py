"""16-bit single-channel PNG depth maps: stored value / 256 = depth in meters, 0 = invalid."""

from pathlib import Path

import cv2
import numpy as np

from plinterp.core.exceptions import DepthRangeError, MalformedFileError
from plinterp.log import logger
from plinterp.schemas.geometry import DepthMap
from plinterp.settings import settings
from plinterp.utils.rounding import round_half_up

UINT16_MAX = 65535


def read_depth_png(path: str | Path) -> DepthMap:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(2, "depth map not found", str(path))
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise MalformedFileError("not a decodable image", path=path, offset=0)
    if raw.ndim != 2 or raw.dtype != np.uint16:
        raise MalformedFileError(f"expected a 16-bit single-channel image, got {raw.dtype} {raw.shape}", path=path)
    depth = decode_depth(raw)
    if np.any(depth.depths > settings.MAX_DEPTH_M):
        raise DepthRangeError(f"{path}: depth above {settings.MAX_DEPTH_M} m")
    return depth


def decode_depth(stored: np.ndarray) -> DepthMap:
    return DepthMap(depths=stored.astype(np.float64) / settings.DEPTH_PNG_SCALE)


def encode_depth(depth: DepthMap) -> np.ndarray:
    """Stored uint16 payload of a map (round half-up of depth * 256)."""
    if np.any(depth.depths > settings.MAX_DEPTH_M):
        raise DepthRangeError(f"depth above {settings.MAX_DEPTH_M} m cannot be stored")
    stored = round_half_up(depth.depths * settings.DEPTH_PNG_SCALE)
    if np.any(stored > UINT16_MAX):
        raise DepthRangeError(f"stored depth exceeds {UINT16_MAX}")
    return stored.astype(np.uint16)


def write_depth_png(depth: DepthMap, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not cv2.imwrite(str(path), encode_depth(depth)):
        raise OSError(f"could not write depth map to {path}")
    logger.debug(f"wrote {depth.width}x{depth.height} depth map ({depth.n_valid} valid) to {path}")
    return path
