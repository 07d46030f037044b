"""
PLSF0001 scene-flow files:
    8-byte magic ``PLSF0001`` | u64 LE count n | n x (dx, dy, dz) float32 LE
"""

from pathlib import Path

import numpy as np

from plinterp.core.exceptions import MalformedFileError
from plinterp.schemas.flow import SceneFlow

MAGIC = b"PLSF0001"
HEADER_BYTES = len(MAGIC) + 8
VECTOR_BYTES = 12


def read_scene_flow(path: str | Path) -> SceneFlow:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < HEADER_BYTES:
        raise MalformedFileError("truncated header", path=path, offset=len(data))
    if data[: len(MAGIC)] != MAGIC:
        raise MalformedFileError(f"bad magic {data[:len(MAGIC)]!r}", path=path, offset=0)
    n = int(np.frombuffer(data, dtype="<u8", count=1, offset=len(MAGIC))[0])
    expected = HEADER_BYTES + n * VECTOR_BYTES
    if len(data) != expected:
        raise MalformedFileError(
            f"count {n} needs {expected} bytes, file has {len(data)}", path=path, offset=min(len(data), expected)
        )
    vectors = np.frombuffer(data, dtype="<f4", offset=HEADER_BYTES).reshape(n, 3)
    bad = np.flatnonzero(~np.isfinite(vectors).all(axis=1))
    if len(bad):
        raise MalformedFileError("non-finite flow vector", path=path, offset=HEADER_BYTES + int(bad[0]) * VECTOR_BYTES)
    return SceneFlow(vectors=vectors)


def write_scene_flow(sf: SceneFlow, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = MAGIC + np.array([len(sf)], dtype="<u8").tobytes()
    path.write_bytes(header + sf.vectors.astype("<f4").tobytes())
    return path
