from pathlib import Path
from typing import Optional

import yaml

from plinterp.core import motion as rigid
from plinterp.core.geometry import back_project
from plinterp.core.pool import FramePool
from plinterp.io import (
    generate_synthetic,
    optical_flow_from_motion,
    write_cloud_bin,
    write_depth_png,
    write_intrinsics,
    write_optical_flow,
    write_scene_flow,
)
from plinterp.io.depth_png import decode_depth, encode_depth
from plinterp.log import logger
from plinterp.models.enums import FlowDirection
from plinterp.schemas.base import Fail, Success
from plinterp.schemas.flow import SceneFlow
from plinterp.schemas.geometry import DepthMap
from plinterp.schemas.scenes import SyntheticSpec

# output sub-directory per artifact; every file inside is named <frame id>.<ext>
LAYOUT = {
    "prev": "png",
    "next": "png",
    "mid": "png",
    "gt": "png",
    "gt_cloud": "bin",
    "flow_fwd": "plsf",
    "flow_bwd": "plsf",
    "optical_fwd": "plof",
    "optical_bwd": "plof",
}


def stored(depth: DepthMap) -> DepthMap:
    """The map exactly as it reads back from a depth PNG."""
    return decode_depth(encode_depth(depth))


class SynthController:
    def write_frame(self, frame_id: str, spec: SyntheticSpec, output: Path) -> list[Path]:
        """
        Generate one scene and write it. Flows are computed on the back-projection of the
        maps as stored on disk, so they stay index-aligned with what a reader sees.
        """
        scene = generate_synthetic(spec)
        k, m = spec.intrinsics, spec.motion
        prev = stored(scene.sparse_prev)
        next_ = stored(scene.sparse_next)
        pc_prev = back_project(prev, k)
        pc_next = back_project(next_, k)

        def path(kind: str) -> Path:
            return output / kind / f"{frame_id}.{LAYOUT[kind]}"

        return [
            write_depth_png(prev, path("prev")),
            write_depth_png(next_, path("next")),
            write_depth_png(scene.sparse_mid, path("mid")),
            write_depth_png(scene.dense_mid, path("gt")),
            write_cloud_bin(scene.cloud_mid, path("gt_cloud")),
            write_scene_flow(SceneFlow(vectors=rigid.forward_flow(pc_prev.points, m)), path("flow_fwd")),
            write_scene_flow(SceneFlow(vectors=rigid.backward_flow(pc_next.points, m)), path("flow_bwd")),
            write_optical_flow(
                optical_flow_from_motion(pc_prev, k, m, FlowDirection.FORWARD, spec.width, spec.height),
                path("optical_fwd"),
            ),
            write_optical_flow(
                optical_flow_from_motion(pc_next, k, m, FlowDirection.BACKWARD, spec.width, spec.height),
                path("optical_bwd"),
            ),
        ]

    def run(self, spec: SyntheticSpec, frames: int, output: Path, jobs: Optional[int] = None) -> list[Success | Fail]:
        """
        Write ``frames`` scenes; frame i uses seed ``spec.seed + i``. The intrinsics file and
        the generating spec (scene.yaml) go to the output root.
        """
        output.mkdir(parents=True, exist_ok=True)
        write_intrinsics(spec.intrinsics, output / "intrinsics.txt")
        (output / "scene.yaml").write_text(
            yaml.safe_dump({"frames": frames, **spec.model_dump(mode="json")}, sort_keys=False), encoding="utf-8"
        )
        items = [(f"{i:06d}", spec.model_copy(update={"seed": spec.seed + i})) for i in range(frames)]
        results = FramePool(lambda item: self.write_frame(item[0], item[1], output), jobs=jobs).map(
            [(frame_id, (frame_id, frame_spec)) for frame_id, frame_spec in items]
        )
        logger.info(f"synth: wrote {sum(isinstance(r, Success) for r in results)} of {frames} frame(s) to {output}")
        return results


synth_controller = SynthController()
