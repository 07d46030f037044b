from pathlib import Path
from typing import Annotated

import typer
from rich.console import Console

from plinterp.controllers import report_controller

console = Console()


def summarize(
    reports: Annotated[list[Path], typer.Argument(exists=True, dir_okay=False, help="report.csv / report.json files")],
):
    """Side-by-side aggregate means of several reports."""
    means = {}
    for path in reports:
        label = path.parent.name or path.stem
        while label in means:
            label += "'"
        means[label] = report_controller.load_means(path)
    console.print(report_controller.comparison_table(means))
