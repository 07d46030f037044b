from pathlib import Path
from typing import Annotated, Optional

import typer
from rich.console import Console

from plinterp.cli.options import ConfigOpt, SeedOpt
from plinterp.controllers import bench_controller
from plinterp.utils.run_config import build_bench_run

console = Console()


def bench(
    sizes: Annotated[Optional[list[int]], typer.Argument(help="cloud sizes, e.g. 1000 50000 100000")] = None,
    repeats: Annotated[Optional[int], typer.Option("--repeats", help="runs per timing, median reported [5]")] = None,
    brute_max: Annotated[
        Optional[int], typer.Option("--brute-max", help="largest size timed by brute force [50000]")
    ] = None,
    csv: Annotated[bool, typer.Option("--csv", help="print CSV instead of a table")] = False,
    output: Annotated[Optional[Path], typer.Option("--output", "-o", help="also write the CSV here")] = None,
    seed: SeedOpt = None,
    config: ConfigOpt = None,
):
    """Time KD-tree build and symmetric Chamfer, indexed against brute force."""
    run = build_bench_run(config, sizes=sizes or None, repeats=repeats, brute_max=brute_max, output=output, seed=seed)
    rows = bench_controller.run(run.sizes, repeats=run.repeats, seed=run.seed, brute_max=run.brute_max)
    text = bench_controller.to_csv(rows)
    if run.output is not None:
        run.output.parent.mkdir(parents=True, exist_ok=True)
        run.output.write_text(text, encoding="utf-8")
    if csv:
        typer.echo(text, nl=False)
    else:
        console.print(bench_controller.table(rows))
