"""
Scaling benchmark: amortized update time across vertex counts
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

from .workload import gen_random

logger = logging.getLogger(__name__)


@dataclass
class BenchCell:
    n: int
    threshold: int
    updates: int
    seconds: float
    micros_per_update: float
    growth: Optional[float] = None
    sqrt_ratio: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def run_bench(n_list: Sequence[int], updates_per_n: Optional[int] = None, seed: int = 0,
              p_insert: float = 0.6) -> List[BenchCell]:
    """
    One random sequence per n (10n updates unless updates_per_n is given),
    replayed without verification or metrics. Only the update loop is timed.
    """
    from ..core.processor import ReplayProcessor

    cells: List[BenchCell] = []
    for n in n_list:
        updates = updates_per_n if updates_per_n is not None else 10 * n
        seq = gen_random(n, updates, p_insert, seed)
        processor = ReplayProcessor(seed=seed, collect_metrics=False, final_verify=False)
        result = processor.run(seq)
        seconds = result.stats.total_seconds
        micros = seconds / updates * 1e6 if updates else 0.0
        cell = BenchCell(n, result.state.threshold, updates, seconds, micros)
        if cells:
            previous = cells[-1]
            if previous.micros_per_update > 0:
                cell.growth = micros / previous.micros_per_update
            cell.sqrt_ratio = math.sqrt(n / previous.n)
        cells.append(cell)
        logger.info(f"📈 n={n}: {micros:.2f} µs/update over {updates} updates")
    return cells


def format_table(cells: Sequence[BenchCell]) -> str:
    header = f"{'n':>10} {'threshold':>10} {'updates':>10} {'µs/update':>12} {'growth':>8} {'√ratio':>8}"
    lines = [header, '-' * len(header)]
    for cell in cells:
        growth = f"{cell.growth:.2f}" if cell.growth is not None else '-'
        sqrt_ratio = f"{cell.sqrt_ratio:.2f}" if cell.sqrt_ratio is not None else '-'
        lines.append(
            f"{cell.n:>10} {cell.threshold:>10} {cell.updates:>10} "
            f"{cell.micros_per_update:>12.2f} {growth:>8} {sqrt_ratio:>8}"
        )
    return '\n'.join(lines)
