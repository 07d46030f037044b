"""KITTI velodyne-style binary clouds: little-endian float32 records (x, y, z, attribute)."""

from pathlib import Path

import numpy as np

from plinterp.core.exceptions import MalformedFileError
from plinterp.schemas.geometry import PointCloud

RECORD = np.dtype("<f4")
RECORD_BYTES = 4 * RECORD.itemsize


def read_cloud_bin(path: str | Path) -> PointCloud:
    path = Path(path)
    data = path.read_bytes()
    usable = len(data) - len(data) % RECORD_BYTES
    if usable != len(data):
        raise MalformedFileError(f"length {len(data)} is not a multiple of {RECORD_BYTES}", path=path, offset=usable)
    records = np.frombuffer(data, dtype=RECORD).reshape(-1, 4)
    bad = np.flatnonzero(~np.isfinite(records).all(axis=1))
    if len(bad):
        raise MalformedFileError("non-finite coordinate", path=path, offset=int(bad[0]) * RECORD_BYTES)
    return PointCloud(points=records[:, :3], attributes=records[:, 3])


def write_cloud_bin(pc: PointCloud, path: str | Path) -> Path:
    """Attributes beyond the first column are not stored; a cloud without attributes stores 0."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records = np.zeros((len(pc), 4), dtype=RECORD)
    records[:, :3] = pc.points
    if pc.attributes is not None and pc.attributes.shape[1] > 0:
        records[:, 3] = pc.attributes[:, 0]
    path.write_bytes(records.tobytes())
    return path
