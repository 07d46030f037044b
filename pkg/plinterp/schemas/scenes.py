import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from plinterp.models.enums import SceneLayout
from plinterp.settings import settings

from .base import ValueModel
from .flow import SceneFlow
from .geometry import CameraIntrinsics, DepthMap, PointCloud

Vec3 = tuple[float, float, float]

# KITTI left color camera, shifted for the bottom 1216x256 crop of a 1242x375 frame
KITTI_CROPPED_INTRINSICS = CameraIntrinsics(f_u=721.5377, f_v=721.5377, c_u=609.5593 - 13, c_v=172.854 - 119)


class MotionSpec(BaseModel):
    """
    Rigid motion of the scene between t-1 and t+1: rotation about an axis through ``pivot``
    (axis-angle vector, radians) followed by a translation (meters). Fraction ``s`` of the
    motion rotates by s*angle about the same axis and translates by s*translation.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    rotation: Vec3 = (0.0, 0.0, 0.0)
    translation: Vec3 = (0.0, 0.0, 0.0)
    pivot: Vec3 = (0.0, 0.0, 20.0)

    @field_validator("rotation")
    @classmethod
    def _small_rotation(cls, v: Vec3) -> Vec3:
        if not math.hypot(*v) < math.pi / 4:
            raise ValueError("rotation angle must be below pi/4")
        return v

    @field_validator("translation")
    @classmethod
    def _bounded_translation(cls, v: Vec3) -> Vec3:
        if not math.hypot(*v) <= 5.0:
            raise ValueError("translation must be at most 5 m")
        return v


class SyntheticSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    width: int = Field(settings.CROP_WIDTH, gt=0)
    height: int = Field(settings.CROP_HEIGHT, gt=0)
    intrinsics: CameraIntrinsics = KITTI_CROPPED_INTRINSICS
    motion: MotionSpec = MotionSpec()
    sparsity: float = Field(settings.SYNTH_SPARSITY, gt=0, le=1)
    seed: int = settings.SEED
    layout: SceneLayout = SceneLayout.STREET
    n_boxes: int = Field(3, ge=0)
    wall_depth: float = Field(40.0, gt=0, le=settings.MAX_DEPTH_M)
    camera_height: float = Field(1.65, gt=0)


class SyntheticScene(ValueModel):
    """
    Ground truth for one frame triple. Clouds are dense ray casts at pixel centres;
    ``flow_fwd`` is aligned to ``cloud_prev`` and ``flow_bwd`` to ``cloud_next``.
    Sparse maps share one seeded scan pattern.
    """

    spec: SyntheticSpec
    cloud_prev: PointCloud
    cloud_mid: PointCloud
    cloud_next: PointCloud
    flow_fwd: SceneFlow
    flow_bwd: SceneFlow
    sparse_prev: DepthMap
    sparse_mid: DepthMap
    sparse_next: DepthMap
    dense_mid: DepthMap
    scan_mask: np.ndarray

    @property
    def intrinsics(self) -> CameraIntrinsics:
        return self.spec.intrinsics

    @property
    def motion(self) -> MotionSpec:
        return self.spec.motion

    @property
    def seed(self) -> int:
        return self.spec.seed

    @property
    def sparsity(self) -> float:
        return self.spec.sparsity
