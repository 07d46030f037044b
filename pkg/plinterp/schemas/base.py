from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict


class ValueModel(BaseModel):
    """
    Immutable value type. Array fields are copied on construction and marked read-only,
    so instances can be shared between threads without locking.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def frozen_array(value: Any, dtype, ndim: int, width: Optional[int] = None, name: str = "array") -> np.ndarray:
    """
    Convert ``value`` into a read-only, C-contiguous array of ``dtype``.
    Parameters:
        ndim: required number of dimensions.
        width: required size of the last axis, if fixed.
    """
    arr = np.array(value, dtype=dtype, copy=True, order="C")
    if arr.ndim == 1 and ndim == 2 and arr.size == 0:
        arr = arr.reshape(0, width or 0)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must have {ndim} dimensions, got shape {arr.shape}")
    if width is not None and arr.shape[-1] != width:
        raise ValueError(f"{name} must have last axis of size {width}, got shape {arr.shape}")
    if np.issubdtype(arr.dtype, np.floating) and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


class Success(ValueModel):
    """Outcome of one frame job that completed."""

    frame_id: str
    data: Any = None
    wall_ms: float = 0.0
    stage_ms: dict[str, float] = {}


class Fail(ValueModel):
    """Outcome of one frame job that raised; the batch goes on without it."""

    frame_id: str
    msg: str
    error_type: str = "Exception"
