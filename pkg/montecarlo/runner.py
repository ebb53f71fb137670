import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from utils.paginator import Paginator


logger = logging.getLogger(__name__)

# комплексных отсчетов на одну пачку испытаний
BATCH_ELEMENTS = 1 << 22


@dataclass
class BatchOutcome:
    hits: np.ndarray
    extras: list = field(default_factory=list)


def batch_trials(batch_size: int, n: int, grid_factor: int = 1) -> int:
    """Размер пачки зависит только от конфигурации и n, но не от числа потоков."""
    return max(1, min(batch_size, BATCH_ELEMENTS // (n * grid_factor)))


def _reduce(outcomes: list[BatchOutcome]) -> BatchOutcome:
    hits = outcomes[0].hits.copy()
    extras = list(outcomes[0].extras)
    for outcome in outcomes[1:]:
        hits = hits + outcome.hits
        extras.extend(outcome.extras)
    return BatchOutcome(hits, extras)


async def gather_batches(fn: Callable[[np.ndarray], BatchOutcome], trials: int, per_batch: int,
                         threads: int) -> BatchOutcome:
    """
    Запускает fn на каждой пачке номеров испытаний в пуле потоков.

    Аргументы:
        fn: чистая функция номеров испытаний.
        trials (int): число испытаний.
        per_batch (int): размер пачки.
        threads (int): число потоков пула.

    Возвращает:
        BatchOutcome: сумма счетчиков и дополнительные записи в порядке пачек.
    """
    pages = Paginator.trials(trials, per_batch).all_pages()
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [loop.run_in_executor(pool, fn, page) for page in pages]
        outcomes = await asyncio.gather(*futures)
    logger.debug('Reduced %d batches of up to %d trials on %d threads', len(pages), per_batch, threads)
    return _reduce(list(outcomes))


def map_batches(fn: Callable[[np.ndarray], BatchOutcome], trials: int, per_batch: int,
                threads: int) -> BatchOutcome:
    return asyncio.run(gather_batches(fn, trials, per_batch, threads))
