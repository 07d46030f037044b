"""ASCII PLY export for viewing clouds in standard viewers."""

from pathlib import Path

import numpy as np

from plinterp.core.exceptions import MalformedFileError
from plinterp.schemas.geometry import PointCloud


def _attribute_names(d: int) -> list[str]:
    return ["scalar"] if d == 1 else [f"scalar_{i}" for i in range(d)]


def write_ply(pc: PointCloud, path: str | Path) -> Path:
    """Vertices x/y/z, plus one scalar property per attribute column when present."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = [pc.points]
    names = ["x", "y", "z"]
    if pc.attributes is not None and pc.attributes.shape[1] > 0:
        columns.append(pc.attributes)
        names += _attribute_names(pc.attributes.shape[1])

    header = ["ply", "format ascii 1.0", f"element vertex {len(pc)}"]
    header += [f"property double {name}" for name in names]
    header.append("end_header")
    with path.open("w", encoding="ascii") as f:
        f.write("\n".join(header) + "\n")
        if len(pc):
            np.savetxt(f, np.hstack(columns), fmt="%.17g")
    return path


def read_ply(path: str | Path) -> PointCloud:
    """Reader for the files ``write_ply`` produces (ASCII, one vertex element)."""
    path = Path(path)
    lines = path.read_text(encoding="ascii").splitlines()
    if not lines or lines[0] != "ply":
        raise MalformedFileError("missing ply signature", path=path, offset=0)
    try:
        end = lines.index("end_header")
    except ValueError:
        raise MalformedFileError("missing end_header", path=path)
    n = 0
    props: list[str] = []
    for line in lines[1:end]:
        parts = line.split()
        if parts[:2] == ["element", "vertex"]:
            n = int(parts[2])
        elif parts and parts[0] == "property":
            props.append(parts[-1])
    body = lines[end + 1 : end + 1 + n]
    if len(body) != n:
        raise MalformedFileError(f"expected {n} vertices, found {len(body)}", path=path)
    data = np.array([[float(x) for x in line.split()] for line in body], dtype=np.float64).reshape(n, len(props))
    return PointCloud(points=data[:, :3], attributes=data[:, 3:] if len(props) > 3 else None)
