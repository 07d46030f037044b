import contextvars

# Id of the frame being processed; set by the worker pool before a job runs so log lines
# emitted from any stage can be attributed to the frame.
CTX_FRAME_ID: contextvars.ContextVar[str] = contextvars.ContextVar("frame_id", default="-")

# Stage name -> accumulated milliseconds for the current frame.
CTX_STAGE_TIMES: contextvars.ContextVar[dict[str, float] | None] = contextvars.ContextVar("stage_times", default=None)
