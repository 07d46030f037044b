import functools
from typing import Callable

import typer

from plinterp.cli import COMMANDS
from plinterp.core.exceptions import handle_exception
from plinterp.log import loggin
from plinterp.settings import settings


def guarded(fn: Callable) -> Callable:
    """Route exceptions raised by a command through the registered handlers."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (typer.Exit, typer.Abort):
            raise
        except Exception as exc:
            handle_exception(exc)

    return wrapper


def register_commands(app: typer.Typer) -> None:
    for name, fn in COMMANDS.items():
        app.command(name)(guarded(fn))


def show_version(value: bool) -> None:
    if value:
        typer.echo(f"{settings.APP_TITLE} {settings.VERSION}")
        raise typer.Exit()


def register_callback(app: typer.Typer) -> None:
    @app.callback()
    def main(
        verbose: bool = typer.Option(False, "--verbose", "-v", help="log at DEBUG level"),
        version: bool = typer.Option(False, "--version", callback=show_version, is_eager=True, help="print version"),
    ):
        """Pseudo-LiDAR interpolation between sparse depth frames."""
        if verbose:
            loggin.setup_logger("DEBUG")
