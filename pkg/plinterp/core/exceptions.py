from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

err_console = Console(stderr=True)


class SettingNotFound(Exception):
    """
    Raised when the settings module cannot be imported.
    """

    pass


class PlinterpError(ValueError):
    """Base class for every input or precondition error raised by the library."""


class DimensionError(PlinterpError):
    """Image dimensions disagree or a crop target exceeds its source."""


class EmptyCloudError(PlinterpError):
    """An operation that needs at least one point received an empty cloud."""


class SizeMismatchError(PlinterpError):
    """Counts that must agree (cloud vs flow, EMD inputs, paired frame lists) do not."""


class LimitExceededError(PlinterpError):
    """Input is larger than an exact algorithm accepts."""


class DepthRangeError(PlinterpError):
    """A depth value cannot be represented in the target encoding."""


class MissingKeyError(PlinterpError):
    """A required key is absent from a text file."""


class EmptyBatchError(PlinterpError):
    """A batch operation received no samples."""


class NoValidPixelsError(PlinterpError):
    """Ground truth has no valid pixel, so depth metrics are undefined."""


class ConfigError(PlinterpError):
    """A run configuration failed validation."""


class MissingInputError(PlinterpError):
    """A frame has no file for one of its inputs."""


class MalformedFileError(PlinterpError):
    """
    A file does not follow its declared layout.
    Parameters:
        path: offending file.
        offset: byte offset of the first inconsistency, when known.
    """

    def __init__(self, msg: str, path: str | Path | None = None, offset: Optional[int] = None):
        self.path = str(path) if path is not None else None
        self.offset = offset
        where = ""
        if self.path:
            where = f" [{self.path}"
            where += f" @ byte {offset}]" if offset is not None else "]"
        super().__init__(f"{msg}{where}")


def PlinterpErrorHandle(exc: PlinterpError) -> int:
    """
    Print a library error and return the exit code for it.
    """
    err_console.print(f"[bold red]error[/]: {type(exc).__name__}: {escape(str(exc))}")
    return 2


def ValidationHandle(exc: ValidationError) -> int:
    """
    Print a pydantic validation error (broken invariant on a value type) and return its exit code.
    """
    err_console.print(f"[bold red]error[/]: invalid value, {exc.error_count()} problem(s)")
    for item in exc.errors():
        loc = ".".join(str(p) for p in item["loc"]) or "<root>"
        err_console.print(f"  {escape(loc)}: {escape(item['msg'])}")
    return 2


def FileNotFoundHandle(exc: FileNotFoundError) -> int:
    err_console.print(f"[bold red]error[/]: file not found: {escape(str(exc.filename or exc))}")
    return 2


EXCEPTION_HANDLERS = (
    (PlinterpError, PlinterpErrorHandle),
    (ValidationError, ValidationHandle),
    (FileNotFoundError, FileNotFoundHandle),
)


def handle_exception(exc: BaseException) -> None:
    """
    Route an exception raised by a command to its handler and exit; unknown errors propagate.
    """
    for exc_type, handler in EXCEPTION_HANDLERS:
        if isinstance(exc, exc_type):
            raise typer.Exit(code=handler(exc))
    raise exc
