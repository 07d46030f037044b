"""
PLOF0001 optical-flow files:
    8-byte magic ``PLOF0001`` | u64 LE width | u64 LE height | W*H x (du, dv) float32 LE, row-major
"""

from pathlib import Path

import numpy as np

from plinterp.core.exceptions import MalformedFileError
from plinterp.schemas.flow import OpticalFlow

MAGIC = b"PLOF0001"
HEADER_BYTES = len(MAGIC) + 16
PIXEL_BYTES = 8


def read_optical_flow(path: str | Path) -> OpticalFlow:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < HEADER_BYTES:
        raise MalformedFileError("truncated header", path=path, offset=len(data))
    if data[: len(MAGIC)] != MAGIC:
        raise MalformedFileError(f"bad magic {data[:len(MAGIC)]!r}", path=path, offset=0)
    width, height = (int(x) for x in np.frombuffer(data, dtype="<u8", count=2, offset=len(MAGIC)))
    expected = HEADER_BYTES + width * height * PIXEL_BYTES
    if len(data) != expected:
        raise MalformedFileError(
            f"{width}x{height} needs {expected} bytes, file has {len(data)}", path=path, offset=min(len(data), expected)
        )
    vectors = np.frombuffer(data, dtype="<f4", offset=HEADER_BYTES).reshape(height, width, 2)
    if not np.isfinite(vectors).all():
        first = int(np.flatnonzero(~np.isfinite(vectors).all(axis=2).ravel())[0])
        raise MalformedFileError("non-finite flow vector", path=path, offset=HEADER_BYTES + first * PIXEL_BYTES)
    return OpticalFlow(vectors=vectors)


def write_optical_flow(of: OpticalFlow, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = MAGIC + np.array([of.width, of.height], dtype="<u8").tobytes()
    path.write_bytes(header + of.vectors.astype("<f4").tobytes())
    return path
