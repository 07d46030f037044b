from .cloud_bin import read_cloud_bin, write_cloud_bin
from .depth_png import read_depth_png, write_depth_png
from .flow_file import read_scene_flow, write_scene_flow
from .intrinsics import read_intrinsics, write_intrinsics
from .optical_flow_file import read_optical_flow, write_optical_flow
from .ply import read_ply, write_ply
from .synthetic import generate_synthetic, optical_flow_from_motion

__all__ = [
    "read_cloud_bin",
    "write_cloud_bin",
    "read_depth_png",
    "write_depth_png",
    "read_scene_flow",
    "write_scene_flow",
    "read_intrinsics",
    "write_intrinsics",
    "read_optical_flow",
    "write_optical_flow",
    "read_ply",
    "write_ply",
    "generate_synthetic",
    "optical_flow_from_motion",
]
