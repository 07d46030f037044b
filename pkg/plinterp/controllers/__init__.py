from .baseline import baseline_controller
from .bench import bench_controller
from .evaluate import evaluate_controller
from .interpolate import interpolate_controller
from .report import report_controller
from .synth import synth_controller

__all__ = [
    "baseline_controller",
    "bench_controller",
    "evaluate_controller",
    "interpolate_controller",
    "report_controller",
    "synth_controller",
]
