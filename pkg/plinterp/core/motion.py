"""Rigid scene motion between t-1 (fraction 0) and t+1 (fraction 1)."""

import numpy as np
from scipy.spatial.transform import Rotation

from plinterp.schemas.scenes import MotionSpec


def rotation_matrix(motion: MotionSpec, fraction: float = 1.0) -> np.ndarray:
    return Rotation.from_rotvec(fraction * np.asarray(motion.rotation, dtype=np.float64)).as_matrix()


def pose(points: np.ndarray, motion: MotionSpec, fraction: float = 1.0) -> np.ndarray:
    """Apply ``fraction`` of the motion: rotate by fraction*angle about the pivot axis, then translate by fraction*t."""
    c = np.asarray(motion.pivot, dtype=np.float64)
    t = np.asarray(motion.translation, dtype=np.float64)
    return (points - c) @ rotation_matrix(motion, fraction).T + c + fraction * t


def inverse_pose(points: np.ndarray, motion: MotionSpec, fraction: float = 1.0) -> np.ndarray:
    c = np.asarray(motion.pivot, dtype=np.float64)
    t = np.asarray(motion.translation, dtype=np.float64)
    return (points - c - fraction * t) @ rotation_matrix(motion, fraction) + c


def forward_flow(points: np.ndarray, motion: MotionSpec) -> np.ndarray:
    """pose(p) - p written as (R - I)(p - c) + t, so a pure translation yields t exactly."""
    c = np.asarray(motion.pivot, dtype=np.float64)
    t = np.asarray(motion.translation, dtype=np.float64)
    r = points - c
    return (r @ rotation_matrix(motion).T - r) + t


def backward_flow(points: np.ndarray, motion: MotionSpec) -> np.ndarray:
    """inverse_pose(q) - q for points observed at t+1."""
    c = np.asarray(motion.pivot, dtype=np.float64)
    t = np.asarray(motion.translation, dtype=np.float64)
    r = points - c - t
    return (r @ rotation_matrix(motion) - r) - t
