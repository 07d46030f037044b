"""
Camera intrinsics text files::

    # KITTI left colour camera
    fu 721.5377
    fv 721.5377
    cu 609.5593
    cv 172.854

Keys may appear in any order; ``#`` starts a comment.
"""

from pathlib import Path

from plinterp.core.exceptions import MalformedFileError, MissingKeyError
from plinterp.schemas.geometry import CameraIntrinsics

KEYS = {"fu": "f_u", "fv": "f_v", "cu": "c_u", "cv": "c_v"}


def parse_intrinsics(text: str, path: str | Path | None = None) -> CameraIntrinsics:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0].lower() not in KEYS:
            raise MalformedFileError(f"line {lineno}: expected '<fu|fv|cu|cv> <value>', got {raw!r}", path=path)
        try:
            values[KEYS[parts[0].lower()]] = float(parts[1])
        except ValueError:
            raise MalformedFileError(f"line {lineno}: {parts[1]!r} is not a number", path=path)
    missing = [key for key, field in KEYS.items() if field not in values]
    if missing:
        raise MissingKeyError(f"intrinsics missing {', '.join(missing)}" + (f" in {path}" if path else ""))
    return CameraIntrinsics(**values)


def read_intrinsics(path: str | Path) -> CameraIntrinsics:
    path = Path(path)
    return parse_intrinsics(path.read_text(encoding="utf-8"), path)


def write_intrinsics(k: CameraIntrinsics, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(f"fu {k.f_u!r}\nfv {k.f_v!r}\ncu {k.c_u!r}\ncv {k.c_v!r}\n", encoding="utf-8")
    return path
