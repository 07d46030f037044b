import typer

from plinterp.core.exceptions import SettingNotFound
from plinterp.core.init_app import register_callback, register_commands

try:
    from plinterp.settings.config import settings
except ImportError:
    raise SettingNotFound("Can not import settings")


def create_app() -> typer.Typer:
    app = typer.Typer(
        name=settings.APP_TITLE,
        help=settings.APP_DESCRIPTION,
        no_args_is_help=True,
        pretty_exceptions_enable=False,
    )
    register_callback(app)
    register_commands(app)
    return app


app = create_app()
