"""
Frame discovery. The ``primary`` glob enumerates the frames (sorted; the file stem is the
frame id). Every other input is either a glob, paired with the frames by file stem, or a
template containing ``{id}``, resolved per frame. A frame whose stem a glob does not match
gets ``None`` for that input and fails alone when it is processed; in strict mode any
stem a glob fails to pair is an error for the whole batch.
"""

import glob
import re
from pathlib import Path
from typing import Optional

from plinterp.core.exceptions import ConfigError, SizeMismatchError
from plinterp.log import logger

ID_PLACEHOLDER = "{id}"
GLOB_MAGIC = re.compile(r"[*?[]")


def expand(pattern: str) -> list[Path]:
    return [Path(p) for p in sorted(glob.glob(pattern))]


def static_root(pattern: str) -> Path:
    """Leading part of a glob or template that names a fixed path."""
    fixed = []
    for part in Path(pattern).parts:
        if GLOB_MAGIC.search(part) or ID_PLACEHOLDER in part:
            break
        fixed.append(part)
    return Path(*fixed) if fixed else Path(".")


def by_stem(pattern: str) -> dict[str, Path]:
    """Files matching ``pattern`` keyed by stem; two matches sharing a stem are ambiguous."""
    paths: dict[str, Path] = {}
    for path in expand(pattern):
        if path.stem in paths:
            raise ConfigError(f"{pattern} matches both {paths[path.stem]} and {path} for frame {path.stem}")
        paths[path.stem] = path
    return paths


def discover_frames(
    primary: str, strict: bool = False, **others: Optional[str]
) -> list[tuple[str, dict[str, Optional[Path]]]]:
    """
    Returns:
        ``[(frame_id, {"primary": path, name: path | None, ...}), ...]`` in sorted order;
        inputs given as None are left out.
    """
    if ID_PLACEHOLDER in primary:
        raise ConfigError(f"the frame-defining pattern cannot be a template: {primary}")
    anchors = list(by_stem(primary).values())
    if not anchors:
        raise ConfigError(f"no files match {primary}")
    frame_ids = {anchor.stem for anchor in anchors}

    paired: dict[str, dict[str, Path]] = {}
    for name, pattern in others.items():
        if pattern is None or ID_PLACEHOLDER in pattern:
            continue
        paired[name] = by_stem(pattern)
        missing = frame_ids.difference(paired[name])
        extra = set(paired[name]).difference(frame_ids)
        if strict and (missing or extra):
            raise SizeMismatchError(
                f"{name} does not pair with {primary}: {len(missing)} frame(s) without a file, "
                f"{len(extra)} file(s) without a frame"
            )
        if missing:
            logger.warning(f"{name}: no file for {len(missing)} of {len(anchors)} frame(s) in {pattern}")
        if extra:
            logger.warning(f"{name}: {len(extra)} file(s) in {pattern} match no frame, e.g. {min(extra)}")

    frames = []
    for anchor in anchors:
        frame_id = anchor.stem
        entry: dict[str, Optional[Path]] = {"primary": anchor}
        for name, pattern in others.items():
            if pattern is None:
                continue
            if name in paired:
                entry[name] = paired[name].get(frame_id)
            else:
                entry[name] = Path(pattern.replace(ID_PLACEHOLDER, frame_id))
        frames.append((frame_id, entry))
    return frames
