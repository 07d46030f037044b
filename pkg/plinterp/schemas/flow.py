import numpy as np
from pydantic import field_validator

from .base import ValueModel, frozen_array


class SceneFlow(ValueModel):
    """Per-point displacement (dx, dy, dz) in meters, index-aligned with a source cloud."""

    vectors: np.ndarray

    @field_validator("vectors", mode="before")
    @classmethod
    def _check_vectors(cls, v) -> np.ndarray:
        return frozen_array(v, np.float64, ndim=2, width=3, name="vectors")

    @classmethod
    def zeros(cls, n: int) -> "SceneFlow":
        return cls(vectors=np.zeros((n, 3)))

    def __len__(self) -> int:
        return int(self.vectors.shape[0])

    def __neg__(self) -> "SceneFlow":
        return SceneFlow(vectors=-self.vectors)

    def take(self, indices: np.ndarray) -> "SceneFlow":
        return SceneFlow(vectors=self.vectors[np.asarray(indices, dtype=np.int64)])


class OpticalFlow(ValueModel):
    """Per-pixel image-plane displacement (du, dv) in pixels, shape (height, width, 2)."""

    vectors: np.ndarray

    @field_validator("vectors", mode="before")
    @classmethod
    def _check_vectors(cls, v) -> np.ndarray:
        return frozen_array(v, np.float64, ndim=3, width=2, name="vectors")

    @classmethod
    def zeros(cls, width: int, height: int) -> "OpticalFlow":
        return cls(vectors=np.zeros((height, width, 2)))

    @property
    def width(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def height(self) -> int:
        return int(self.vectors.shape[0])
