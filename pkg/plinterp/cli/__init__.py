from .baseline import baseline
from .bench import bench
from .evaluate import evaluate
from .interpolate import interpolate
from .summarize import summarize
from .synth import synth

# command name -> callback, in help order
COMMANDS = {
    "interpolate": interpolate,
    "evaluate": evaluate,
    "baseline": baseline,
    "synth": synth,
    "bench": bench,
    "summarize": summarize,
}
