import time
from contextlib import contextmanager

from plinterp.core.ctx import CTX_STAGE_TIMES


@contextmanager
def stage(name: str):
    """Add the wall time of the block, in ms, to the current frame's stage table (if one is active)."""
    start = time.perf_counter()
    try:
        yield
    finally:
        times = CTX_STAGE_TIMES.get()
        if times is not None:
            times[name] = times.get(name, 0.0) + (time.perf_counter() - start) * 1000.0


@contextmanager
def collect_stages():
    """Activate a fresh stage table for the enclosed block and yield it."""
    times: dict[str, float] = {}
    token = CTX_STAGE_TIMES.set(times)
    try:
        yield times
    finally:
        CTX_STAGE_TIMES.reset(token)
