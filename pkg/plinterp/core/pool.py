"""
Bounded worker pool for per-frame jobs.

Jobs run on worker threads (the numeric kernels release the GIL) with at most ``jobs``
in flight. Every job runs with its frame id in ``CTX_FRAME_ID`` and its own stage
table; a job that raises becomes a ``Fail`` and never stops the batch. Results come
back in input order whatever the completion order.
"""

import os
import time
from typing import Callable, Generic, Optional, Sequence, TypeVar

import anyio
from anyio import CapacityLimiter, to_thread

from plinterp.core.ctx import CTX_FRAME_ID
from plinterp.core.timing import collect_stages
from plinterp.log import logger
from plinterp.schemas.base import Fail, Success
from plinterp.settings import settings

JobInput = TypeVar("JobInput")
JobResult = Success | Fail


def default_jobs() -> int:
    return settings.JOBS or os.cpu_count() or 1


class FramePool(Generic[JobInput]):
    def __init__(self, fn: Callable[[JobInput], object], jobs: Optional[int] = None):
        """
        Parameters:
            fn: job body, called once per frame with that frame's input.
            jobs: concurrency bound; defaults to ``settings.JOBS`` or the logical core count.
        """
        self.fn = fn
        self.jobs = jobs or default_jobs()

    def _call(self, frame_id: str, item: JobInput) -> JobResult:
        token = CTX_FRAME_ID.set(frame_id)
        start = time.perf_counter()
        try:
            with collect_stages() as stages:
                data = self.fn(item)
            wall_ms = (time.perf_counter() - start) * 1000.0
            logger.info(f"frame done in {wall_ms:.1f} ms")
            return Success(frame_id=frame_id, data=data, wall_ms=wall_ms, stage_ms=dict(stages))
        except Exception as exc:
            logger.warning(f"frame failed: {type(exc).__name__}: {exc}")
            return Fail(frame_id=frame_id, msg=str(exc), error_type=type(exc).__name__)
        finally:
            CTX_FRAME_ID.reset(token)

    async def _map(self, items: Sequence[tuple[str, JobInput]]) -> list[JobResult]:
        results: list[Optional[JobResult]] = [None] * len(items)
        limiter = CapacityLimiter(self.jobs)

        async def _one(index: int, frame_id: str, item: JobInput) -> None:
            results[index] = await to_thread.run_sync(self._call, frame_id, item, limiter=limiter)

        async with anyio.create_task_group() as tg:
            for index, (frame_id, item) in enumerate(items):
                tg.start_soon(_one, index, frame_id, item)
        return results

    def map(self, items: Sequence[tuple[str, JobInput]]) -> list[JobResult]:
        """Run ``fn`` over ``(frame_id, input)`` pairs; one Success or Fail per pair, in order."""
        if not items:
            return []
        if self.jobs == 1:
            return [self._call(frame_id, item) for frame_id, item in items]
        return anyio.run(self._map, items)
