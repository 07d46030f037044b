import csv
import io
import statistics
import time
from typing import Callable, Optional, Sequence

import numpy as np
from rich.table import Table

from plinterp.core.exceptions import ConfigError
from plinterp.core.metrics import chamfer, chamfer_directional_brute
from plinterp.core.spatial_index import build
from plinterp.log import logger
from plinterp.schemas.bench import BENCH_COLUMNS, BenchRow
from plinterp.schemas.geometry import PointCloud
from plinterp.settings import settings


def median_ms(fn: Callable[[], object], repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(times)


class BenchController:
    def __init__(self):
        self._warm = False

    def warm_up(self) -> None:
        """Compile the numba kernels before anything is timed."""
        if self._warm:
            return
        pc = PointCloud(points=np.random.default_rng(0).uniform(size=(64, 3)))
        chamfer(pc, pc)
        chamfer_directional_brute(pc, pc)
        self._warm = True

    def clouds(self, n: int, seed: int) -> tuple[PointCloud, PointCloud]:
        rng = np.random.default_rng([seed, n])
        a = PointCloud(points=rng.uniform(-20.0, 20.0, size=(n, 3)))
        b = PointCloud(points=rng.uniform(-20.0, 20.0, size=(n, 3)))
        return a, b

    def measure(self, n: int, repeats: int, seed: int, brute_max: int) -> BenchRow:
        """Symmetric Chamfer between two uniform n-point clouds, indexed (tree build included) and brute force."""
        a, b = self.clouds(n, seed)
        build_ms = median_ms(lambda: build(b), repeats)
        indexed_ms = median_ms(lambda: chamfer(a, b), repeats)
        brute_ms = None
        if n <= brute_max:
            brute_ms = median_ms(lambda: (chamfer_directional_brute(a, b), chamfer_directional_brute(b, a)), repeats)
        else:
            logger.info(f"n={n}: brute force skipped (above {brute_max})")
        return BenchRow(n=n, build_ms=build_ms, chamfer_indexed_ms=indexed_ms, chamfer_brute_ms=brute_ms)

    def run(
        self,
        sizes: Sequence[int],
        repeats: Optional[int] = None,
        seed: Optional[int] = None,
        brute_max: Optional[int] = None,
    ) -> list[BenchRow]:
        repeats = repeats or settings.BENCH_REPEATS
        if repeats < 5:
            raise ConfigError(f"bench needs at least 5 repeats for a median, got {repeats}")
        if not sizes or any(n <= 0 for n in sizes):
            raise ConfigError(f"bench sizes must be positive, got {list(sizes)}")
        self.warm_up()
        seed = settings.SEED if seed is None else seed
        brute_max = settings.BENCH_BRUTE_MAX if brute_max is None else brute_max
        rows = []
        for n in sizes:
            rows.append(self.measure(n, repeats, seed, brute_max))
            logger.info(f"n={n}: {rows[-1].row()}")
        return rows

    def to_csv(self, rows: list[BenchRow]) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.row())
        return buf.getvalue()

    def table(self, rows: list[BenchRow]) -> Table:
        table = Table(title="Chamfer timing (median ms)")
        for column in BENCH_COLUMNS:
            table.add_column(column, justify="right")
        for row in rows:
            values = row.row()
            table.add_row(str(row.n), *("-" if values[c] is None else f"{values[c]:.3f}" for c in BENCH_COLUMNS[1:]))
        return table


bench_controller = BenchController()
