from pathlib import Path
from typing import Any, Optional

import yaml

from plinterp.core.exceptions import ConfigError
from plinterp.io import read_intrinsics
from plinterp.schemas.bench import BenchRun
from plinterp.schemas.runs import CropSize, RunConfig, SynthRun


def load_config_file(path: Optional[Path]) -> dict[str, Any]:
    if path is None:
        return {}
    if not path.is_file():
        raise ConfigError(f"config file does not exist: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})")
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    return data


def merge_config(config_file: Optional[Path], **flags: Any) -> dict[str, Any]:
    """File values overridden by every flag that is not None."""
    data = load_config_file(config_file)
    data.update({key: value for key, value in flags.items() if value is not None})
    return data


def build_run_config(config_file: Optional[Path] = None, **flags: Any) -> RunConfig:
    """
    Merge a YAML config file with command-line flags into a ``RunConfig``. Flags left
    at None do not override the file; unset keys fall back to the settings defaults.
    ``densify_k``/``densify_radius`` and ``crop`` ("WxH" or "default") are accepted in
    both places.
    """
    data = merge_config(config_file, **flags)

    densify = dict(data.pop("densify", None) or {})
    for key in ("k", "radius"):
        value = data.pop(f"densify_{key}", None)
        if value is not None:
            densify[key] = value
    if densify:
        data["densify"] = densify

    crop = data.get("crop")
    if isinstance(crop, str):
        data["crop"] = CropSize.parse(crop)
    return RunConfig.model_validate(data)


def build_synth_run(config_file: Optional[Path] = None, **flags: Any) -> SynthRun:
    """
    Same merge for ``synth``. Scene keys sit at the top level next to ``frames``, ``output``
    and ``jobs``; ``rotation``/``translation``/``pivot`` may also be nested under ``motion``,
    and ``intrinsics`` is a calibration file path or an f_u/f_v/c_u/c_v mapping. The
    ``scene.yaml`` written by a synth run reads back through here.
    """
    data = merge_config(config_file, **flags)
    run = {key: data.pop(key) for key in ("frames", "output", "jobs") if key in data}

    motion = dict(data.pop("motion", None) or {})
    for key in ("rotation", "translation", "pivot"):
        value = data.pop(key, None)
        if value is not None:
            motion[key] = value
    if motion:
        data["motion"] = motion

    intrinsics = data.get("intrinsics")
    if isinstance(intrinsics, (str, Path)):
        data["intrinsics"] = read_intrinsics(intrinsics)
    return SynthRun.model_validate({**run, "spec": data})


def build_bench_run(config_file: Optional[Path] = None, **flags: Any) -> BenchRun:
    return BenchRun.model_validate(merge_config(config_file, **flags))
