import math
from typing import Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from .base import ValueModel, frozen_array


class CameraIntrinsics(ValueModel):
    f_u: float = Field(..., gt=0, description="horizontal focal length, pixels")
    f_v: float = Field(..., gt=0, description="vertical focal length, pixels")
    c_u: float = Field(..., description="principal point x, pixels")
    c_v: float = Field(..., description="principal point y, pixels")

    @field_validator("f_u", "f_v", "c_u", "c_v")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("intrinsics must be finite")
        return v

    def shifted(self, left: int, top: int) -> "CameraIntrinsics":
        """Intrinsics of a window whose top-left corner sits at (left, top) of the original image."""
        return self.model_copy(update={"c_u": self.c_u - left, "c_v": self.c_v - top})


class DepthMap(ValueModel):
    """Row-major grid of metric depths, shape (height, width). 0 marks an invalid pixel."""

    depths: np.ndarray

    @field_validator("depths", mode="before")
    @classmethod
    def _check_depths(cls, v) -> np.ndarray:
        arr = frozen_array(v, np.float64, ndim=2, name="depths")
        if np.any(arr < 0):
            raise ValueError("depths must be >= 0")
        return arr

    @classmethod
    def zeros(cls, width: int, height: int) -> "DepthMap":
        return cls(depths=np.zeros((height, width), dtype=np.float64))

    @property
    def width(self) -> int:
        return int(self.depths.shape[1])

    @property
    def height(self) -> int:
        return int(self.depths.shape[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    @property
    def valid_mask(self) -> np.ndarray:
        return self.depths > 0

    @property
    def n_valid(self) -> int:
        return int(np.count_nonzero(self.depths))


class PointCloud(ValueModel):
    """
    Ordered points in camera coordinates (meters), with optional per-point attributes
    (shape (n, d_f), e.g. reflectance) and optional (u, v) pixel provenance.
    """

    points: np.ndarray
    attributes: Optional[np.ndarray] = None
    pixel_origin: Optional[np.ndarray] = None

    @field_validator("points", mode="before")
    @classmethod
    def _check_points(cls, v) -> np.ndarray:
        return frozen_array(v, np.float64, ndim=2, width=3, name="points")

    @field_validator("attributes", mode="before")
    @classmethod
    def _check_attributes(cls, v) -> Optional[np.ndarray]:
        if v is None:
            return None
        arr = np.asarray(v, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        return frozen_array(arr, np.float64, ndim=2, name="attributes")

    @field_validator("pixel_origin", mode="before")
    @classmethod
    def _check_pixel_origin(cls, v) -> Optional[np.ndarray]:
        if v is None:
            return None
        return frozen_array(v, np.int64, ndim=2, width=2, name="pixel_origin")

    @model_validator(mode="after")
    def _aligned(self) -> "PointCloud":
        n = len(self.points)
        if self.attributes is not None and len(self.attributes) != n:
            raise ValueError(f"attributes count {len(self.attributes)} != points count {n}")
        if self.pixel_origin is not None and len(self.pixel_origin) != n:
            raise ValueError(f"pixel_origin count {len(self.pixel_origin)} != points count {n}")
        return self

    @classmethod
    def empty(cls) -> "PointCloud":
        return cls(points=np.zeros((0, 3)))

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def take(self, indices: np.ndarray) -> "PointCloud":
        """Sub-cloud of the given indices, in the given order."""
        indices = np.asarray(indices, dtype=np.int64)
        return PointCloud(
            points=self.points[indices],
            attributes=None if self.attributes is None else self.attributes[indices],
            pixel_origin=None if self.pixel_origin is None else self.pixel_origin[indices],
        )

    def with_points(self, points: np.ndarray) -> "PointCloud":
        """Same cloud with moved points; attributes and order are kept, pixel provenance is dropped."""
        return PointCloud(points=points, attributes=self.attributes)

    def concat(self, other: "PointCloud") -> "PointCloud":
        def _join(a: Optional[np.ndarray], b: Optional[np.ndarray]) -> Optional[np.ndarray]:
            if a is None or b is None:
                return None
            if a.shape[1] != b.shape[1]:
                return None
            return np.concatenate([a, b])

        return PointCloud(
            points=np.concatenate([self.points, other.points]),
            attributes=_join(self.attributes, other.attributes),
            pixel_origin=_join(self.pixel_origin, other.pixel_origin),
        )
